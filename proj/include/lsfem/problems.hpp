#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsfem/geometry.hpp"
#include "lsfem/integration.hpp"
#include "lsfem/mesh.hpp"
#include "lsfem/mesh_generators.hpp"

namespace lsfem {

enum class Formulation { ls1, ls2 };
enum class Recovery { first, second };

std::string_view to_string(Formulation f);
std::string_view to_string(Recovery r);
Formulation parse_formulation(std::string_view s);
Recovery parse_recovery(std::string_view s);

/// Which elements contribute samples to a solution trace.
struct TraceSelector {
  enum class Kind {
    boundary_line_y,  // elements owning a boundary edge on y = value; coordinate x
    radial,           // every element; coordinate is the centroid radius
  };
  Kind kind = Kind::boundary_line_y;
  double value = 1.0;
};

struct OvershootWindow {
  double lower = 0.0;
  double upper = 1.0;
  TraceSelector selector;
};

/// Scalar data that may differ on the two sides of the problem's
/// discontinuity; region is +1 / -1 (0 without a discontinuity).
using RegionFn = std::function<double(Vec2, int)>;

struct ProblemSpec {
  std::string name;
  VectorFn beta;
  ScalarFn gamma;
  RegionFn f;
  ScalarFn g;
  RegionFn exact_u;  // empty when no exact solution is known
  std::optional<Interface> discontinuity;

  std::string domain;
  double domain_area = 0.0;
  bool curved_boundary = false;

  std::string mesh_name;
  MeshParams mesh_params;
  /// Uniform sequences are produced by regenerating the mesh with h halved
  /// instead of refining (Peterson family).
  bool regenerate_for_uniform = false;

  std::optional<OvershootWindow> overshoot;
  std::optional<double> epsilon;
  bool allow_ls1 = true;
  bool allow_ls2 = true;

  bool has_exact() const { return static_cast<bool>(exact_u); }
  int region(Vec2 x) const { return discontinuity ? discontinuity->side(x) : 0; }
  double f_at(Vec2 x) const { return f(x, region(x)); }
  double u_at(Vec2 x) const { return exact_u(x, region(x)); }
  const Interface* cut() const { return discontinuity ? &*discontinuity : nullptr; }

  bool allows(Formulation form) const { return form == Formulation::ls1 ? allow_ls1 : allow_ls2; }
  /// The first recovery needs |beta| > 0, the second gamma != 0.
  bool allows(Recovery rec) const { return rec == Recovery::first ? allow_ls1 : allow_ls2; }
};

struct ProblemParams {
  double epsilon = 0.01;
  double peterson_h = 1.0 / 6.0;
  int aligned_n = 4;
};

/// Catalog: ex51, ex52, ex53_peterson, ex54, ex55, ex56, ex57_curved,
/// ex58_layer.
ProblemSpec builtin(std::string_view name, const ProblemParams& params = {});
std::vector<std::string> catalog_names();

/// (-b2, b1) / |b|.
Vec2 beta_perp(Vec2 beta);

struct ExactFlux {
  Vec2 sigma;
  double div = 0.0;
};

/// sigma = beta u and div sigma = f - gamma u. Throws on the discontinuity.
ExactFlux exact_sigma(const ProblemSpec& problem, Vec2 x);
/// Same, with the side of the discontinuity given explicitly.
ExactFlux exact_sigma(const ProblemSpec& problem, Vec2 x, int region);

/// Catalog initial mesh with boundary edges classified by beta.
Mesh initial_mesh(const ProblemSpec& problem);

}  // namespace lsfem
