#include "spgarch/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "spgarch/error.hpp"

namespace spgarch {
namespace {

// Kronrod abscissae (positive half, descending) and weights; Gauss weights for
// the embedded 7-point rule sit on the odd Kronrod nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options) {
  if (a == b) return {};
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw ContractViolation("integrate_adaptive requires finite limits");
  }
  const double sign = a < b ? 1.0 : -1.0;
  if (sign < 0) std::swap(a, b);

  // Max-heap on error, kept in a vector so the totals can be re-summed.
  std::vector<Segment> heap{gk15(f, a, b)};
  double total = heap.front().value;
  double error = heap.front().error;
  std::size_t evaluations = 15;
  auto resum = [&] {
    total = 0.0;
    error = 0.0;
    for (const Segment& s : heap) {
      total += s.value;
      error += s.error;
    }
  };

  auto converged = [&] {
    return error <= std::max(options.abs_tol, options.rel_tol * std::abs(total));
  };
  while (!converged()) {
    if (heap.size() >= options.max_intervals) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge on [" << a << ", " << b
          << "]: estimate " << total << ", error " << error << " after " << heap.size()
          << " intervals";
      throw NumericError(msg.str());
    }
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    evaluations += 30;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    // Removing a dominant segment cancels catastrophically in the running sums.
    if (std::abs(worst.value) + worst.error > 1e3 * (std::abs(total) + error)) resum();
    if (!(mid > worst.a && mid < worst.b)) break;  // interval width at machine precision
  }
  resum();
  const double value = total;
  const double err = error;
  const std::size_t intervals = heap.size();
  return {sign * value, err, intervals, evaluations};
}

}  // namespace spgarch
