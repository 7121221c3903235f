#pragma once

#include <span>
#include <string>
#include <vector>

#include "spgarch/indicator.hpp"
#include "spgarch/spline.hpp"
#include "spgarch/volmodel.hpp"

namespace spgarch {

enum class ModelKind { SpGarch, Garch, Gjr, Nagarch, BetaT };

std::string to_string(ModelKind kind);
/// Accepts "spgarch", "garch", "gjr", "nagarch", "beta-t"; throws ParseError otherwise.
ModelKind model_kind_from_string(const std::string& name);
FamilyKind family_of(ModelKind kind);

/**
 * @brief Layout of a stored parameter row.
 *
 * SP-GARCH rows: (nu, mu, omega, b0, b1, b2, beta_1..beta_K).
 * Parametric rows: (nu, mu, omega, beta, alpha|alpha1, [alpha2 | c]).
 */
struct ModelDescriptor {
  ModelKind kind = ModelKind::SpGarch;
  KnotPool pool;  ///< SP-GARCH only

  std::size_t row_width() const noexcept;
  std::size_t num_knots() const noexcept { return kind == ModelKind::SpGarch ? pool.size() : 0; }
  std::vector<std::string> column_names() const;
};

/// g(eps) for a stored row; inactive knot coefficients are zero so m is not needed.
double row_g(const ModelDescriptor& model, std::span<const double> row, double eps);

/// Interprets rows of a ModelDescriptor. The table must outlive the view (SP-GARCH only).
class ModelView {
 public:
  ModelView(ModelDescriptor descriptor, const CTable* table);

  const ModelDescriptor& descriptor() const noexcept { return descriptor_; }

  ParamVector spline_params(std::span<const double> row, const Indicator& m) const;
  ParametricParams parametric_params(std::span<const double> row) const;

  double g(std::span<const double> row, const Indicator& m, double eps) const;
  double persistence(std::span<const double> row, const Indicator& m) const;
  double log_likelihood(std::span<const double> row, const Indicator& m,
                        const ReturnSeries& r) const;
  VolatilityPath filter(std::span<const double> row, const Indicator& m,
                        const ReturnSeries& r) const;

 private:
  ModelDescriptor descriptor_;
  const CTable* table_;
};

}  // namespace spgarch
