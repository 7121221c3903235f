#include "spgarch/model.hpp"

#include "spgarch/error.hpp"

namespace spgarch {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::SpGarch: return "spgarch";
    case ModelKind::Garch: return "garch";
    case ModelKind::Gjr: return "gjr";
    case ModelKind::Nagarch: return "nagarch";
    case ModelKind::BetaT: return "beta-t";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  for (ModelKind k : {ModelKind::SpGarch, ModelKind::Garch, ModelKind::Gjr, ModelKind::Nagarch,
                      ModelKind::BetaT}) {
    if (to_string(k) == name) return k;
  }
  throw ParseError("unknown model '" + name + "' (expected spgarch, garch, gjr, nagarch, beta-t)");
}

FamilyKind family_of(ModelKind kind) {
  switch (kind) {
    case ModelKind::Garch: return FamilyKind::Garch;
    case ModelKind::Gjr: return FamilyKind::Gjr;
    case ModelKind::Nagarch: return FamilyKind::Nagarch;
    case ModelKind::BetaT: return FamilyKind::BetaT;
    case ModelKind::SpGarch: break;
  }
  throw ContractViolation("SP-GARCH is not a parametric family");
}

std::size_t ModelDescriptor::row_width() const noexcept {
  switch (kind) {
    case ModelKind::SpGarch: return 6 + pool.size();
    case ModelKind::Garch: return 5;
    default: return 6;
  }
}

std::vector<std::string> ModelDescriptor::column_names() const {
  std::vector<std::string> names{"nu", "mu", "omega"};
  switch (kind) {
    case ModelKind::SpGarch:
      names.insert(names.end(), {"b0", "b1", "b2"});
      for (std::size_t i = 0; i < pool.size(); ++i) names.push_back("beta_" + std::to_string(i + 1));
      break;
    case ModelKind::Garch:
      names.insert(names.end(), {"beta", "alpha"});
      break;
    case ModelKind::Gjr:
    case ModelKind::BetaT:
      names.insert(names.end(), {"beta", "alpha1", "alpha2"});
      break;
    case ModelKind::Nagarch:
      names.insert(names.end(), {"beta", "alpha", "c"});
      break;
  }
  return names;
}

ModelView::ModelView(ModelDescriptor descriptor, const CTable* table)
    : descriptor_(std::move(descriptor)), table_(table) {
  if (descriptor_.kind == ModelKind::SpGarch) {
    if (table_ == nullptr) throw ContractViolation("SP-GARCH view needs a c-table");
    if (!(table_->pool() == descriptor_.pool)) {
      throw ContractViolation("c-table knot pool differs from the model's");
    }
  }
}

ParamVector ModelView::spline_params(std::span<const double> row, const Indicator& m) const {
  if (descriptor_.kind != ModelKind::SpGarch) throw ContractViolation("not an SP-GARCH view");
  if (row.size() != descriptor_.row_width()) throw ContractViolation("row width mismatch");
  ParamVector p;
  p.nu = row[0];
  p.mu = row[1];
  p.omega = row[2];
  p.spline = SplineSpec(descriptor_.pool);
  p.spline.b0 = row[3];
  p.spline.b1 = row[4];
  p.spline.b2 = row[5];
  for (std::size_t i = 0; i < descriptor_.pool.size(); ++i) {
    if (m[i]) p.spline.activate(i, row[6 + i]);
  }
  p.spline.validate();
  return p;
}

ParametricParams ModelView::parametric_params(std::span<const double> row) const {
  if (row.size() != descriptor_.row_width()) throw ContractViolation("row width mismatch");
  ParametricParams p;
  p.nu = row[0];
  p.mu = row[1];
  p.omega = row[2];
  switch (descriptor_.kind) {
    case ModelKind::Garch: p.family = ParametricFamily::garch(row[3], row[4]); break;
    case ModelKind::Gjr: p.family = ParametricFamily::gjr(row[3], row[4], row[5]); break;
    case ModelKind::Nagarch: p.family = ParametricFamily::nagarch(row[3], row[4], row[5]); break;
    case ModelKind::BetaT: p.family = ParametricFamily::beta_t(row[3], row[4], row[5], row[0]); break;
    case ModelKind::SpGarch: throw ContractViolation("not a parametric view");
  }
  return p;
}

double row_g(const ModelDescriptor& model, std::span<const double> row, double eps) {
  if (row.size() != model.row_width()) throw ContractViolation("row width mismatch");
  switch (model.kind) {
    case ModelKind::SpGarch:
      return eval_g_raw(row[3], row[4], row[5], row.subspan(6), model.pool.knots(), eps);
    case ModelKind::Garch:
      return eval_parametric_g(ParametricFamily::garch(row[3], row[4]), eps);
    case ModelKind::Gjr:
      return eval_parametric_g(ParametricFamily::gjr(row[3], row[4], row[5]), eps);
    case ModelKind::Nagarch:
      return eval_parametric_g(ParametricFamily::nagarch(row[3], row[4], row[5]), eps);
    case ModelKind::BetaT:
      return eval_parametric_g(ParametricFamily::beta_t(row[3], row[4], row[5], row[0]), eps);
  }
  return 0.0;
}

double ModelView::g(std::span<const double> row, const Indicator&, double eps) const {
  return row_g(descriptor_, row, eps);
}

double ModelView::persistence(std::span<const double> row, const Indicator& m) const {
  if (descriptor_.kind == ModelKind::SpGarch) {
    return spgarch::persistence(spline_params(row, m).spline, row[0], *table_);
  }
  return parametric_persistence(parametric_params(row).family);
}

double ModelView::log_likelihood(std::span<const double> row, const Indicator& m,
                                 const ReturnSeries& r) const {
  if (descriptor_.kind == ModelKind::SpGarch) {
    return spgarch::log_likelihood(spline_params(row, m), r, *table_);
  }
  return spgarch::log_likelihood(parametric_params(row), r);
}

VolatilityPath ModelView::filter(std::span<const double> row, const Indicator& m,
                                 const ReturnSeries& r) const {
  if (descriptor_.kind == ModelKind::SpGarch) {
    return filter_volatility(spline_params(row, m), r);
  }
  return filter_volatility(parametric_params(row), r);
}

}  // namespace spgarch
