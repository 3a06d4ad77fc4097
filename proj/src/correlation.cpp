#include "seqlocal/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "seqlocal/detail/slots.hpp"
#include "seqlocal/errors.hpp"

namespace seqlocal {

namespace {

using detail::SlotLayout;

void require_binary(const Scenario& s, const char* op) {
  if (!s.is_binary()) throw StructuralError(std::string(op) + " needs 2 settings and 2 outcomes per step");
}

// Largest deviation, over all retained outcomes and settings, of the marginal that sums the
// `summed` outcome slots as the `varying` setting slots move away from 0.
double invariance_residual(const SequentialCorrelation& corr, const std::vector<std::size_t>& summed,
                           const std::vector<std::size_t>& varying) {
  const auto& sc = corr.scenario();
  const SlotLayout layout(sc);
  const std::size_t ob = sc.outcome_blocks();
  const std::size_t sb = sc.setting_blocks();
  std::vector<double> acc(corr.size(), 0.0);
  std::vector<std::size_t> reduced;
  for (std::size_t o = 0; o < ob; ++o) {
    if (layout.zero_out(o, summed) == o) reduced.push_back(o);
  }
  for (std::size_t s = 0; s < sb; ++s) {
    for (std::size_t o = 0; o < ob; ++o) acc[layout.zero_out(o, summed) + ob * s] += corr[o + ob * s];
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < sb; ++s) {
    const std::size_t ref = layout.zero_set(s, varying);
    if (ref == s) continue;
    for (auto o : reduced) worst = std::max(worst, std::abs(acc[o + ob * s] - acc[o + ob * ref]));
  }
  return worst;
}

// Box at step history.length()+1 read off the marginal over that many steps.
std::optional<SingleStepBox> conditional_from_marginal(const SequentialCorrelation& marginal,
                                                       const History& history) {
  std::vector<StepRecord> rec = history.steps();
  rec.push_back({});
  double den = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      rec.back() = {a, b, 0, 0};
      den += marginal.at(rec);
    }
  }
  if (den < kZeroHistoryThreshold) return std::nullopt;
  SingleStepBox box;
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x)
      for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a) {
          rec.back() = {a, b, x, y};
          box(a, b, x, y) = marginal.at(rec) / den;
        }
  return box;
}

}  // namespace

SingleStepBox SingleStepBox::uniform() {
  SingleStepBox b;
  b.p.fill(0.25);
  return b;
}

SingleStepBox SingleStepBox::mix(const SingleStepBox& u, const SingleStepBox& v, double lambda) {
  SingleStepBox out;
  for (std::size_t i = 0; i < kSize; ++i) out.p[i] = lambda * u.p[i] + (1.0 - lambda) * v.p[i];
  return out;
}

double normalization_residual(const SingleStepBox& box) {
  double worst = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double s = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) s += box(a, b, x, y);
      worst = std::max(worst, std::abs(s - 1.0));
    }
  return worst;
}

double signaling_residual(const SingleStepBox& box) {
  double worst = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      const double y0 = box(a, 0, x, 0) + box(a, 1, x, 0);
      const double y1 = box(a, 0, x, 1) + box(a, 1, x, 1);
      worst = std::max(worst, std::abs(y0 - y1));
    }
  for (int y = 0; y < 2; ++y)
    for (int b = 0; b < 2; ++b) {
      const double x0 = box(0, b, 0, y) + box(1, b, 0, y);
      const double x1 = box(0, b, 1, y) + box(1, b, 1, y);
      worst = std::max(worst, std::abs(x0 - x1));
    }
  return worst;
}

double max_abs_diff(const SingleStepBox& u, const SingleStepBox& v) {
  double worst = 0.0;
  for (std::size_t i = 0; i < SingleStepBox::kSize; ++i) worst = std::max(worst, std::abs(u.p[i] - v.p[i]));
  return worst;
}

SequentialCorrelation::SequentialCorrelation(Scenario scenario, std::vector<double> p)
    : scenario_(scenario), p_(std::move(p)) {
  scenario_.check();
  if (p_.size() != scenario_.size()) {
    throw StructuralError("tensor has " + std::to_string(p_.size()) + " entries, scenario needs " +
                          std::to_string(scenario_.size()));
  }
}

SequentialCorrelation::SequentialCorrelation(Scenario scenario) : scenario_(scenario) {
  scenario_.check();
  p_.assign(scenario_.size(), 0.0);
}

SequentialCorrelation SequentialCorrelation::uniform(Scenario scenario) {
  SequentialCorrelation c(scenario);
  std::fill(c.p_.begin(), c.p_.end(), 1.0 / static_cast<double>(scenario.outcome_blocks()));
  return c;
}

std::size_t SequentialCorrelation::index_of(std::span<const StepRecord> record) const {
  if (record.size() != scenario_.steps) throw StructuralError("record length does not match steps");
  std::size_t o = 0;
  std::size_t s = 0;
  for (std::size_t j = 0; j < record.size(); ++j) {
    o += record[j].a * scenario_.outcome_stride(j, Party::Alice) + record[j].b * scenario_.outcome_stride(j, Party::Bob);
    s += record[j].x * scenario_.setting_stride(j, Party::Alice) + record[j].y * scenario_.setting_stride(j, Party::Bob);
  }
  return o + scenario_.outcome_blocks() * s;
}

SequentialCorrelation SequentialCorrelation::mix(const SequentialCorrelation& u, const SequentialCorrelation& v,
                                                 double lambda) {
  if (!(u.scenario() == v.scenario())) throw StructuralError("cannot mix tensors of different scenarios");
  SequentialCorrelation out(u.scenario());
  for (std::size_t i = 0; i < u.size(); ++i) out.p_[i] = lambda * u.p_[i] + (1.0 - lambda) * v.p_[i];
  return out;
}

double max_abs_diff(const SequentialCorrelation& u, const SequentialCorrelation& v) {
  if (!(u.scenario() == v.scenario())) throw StructuralError("scenario mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u[i] - v[i]));
  return worst;
}

ValidationReport validate(const SequentialCorrelation& corr, double tol) {
  ValidationReport r;
  const std::size_t ob = corr.scenario().outcome_blocks();
  for (std::size_t s = 0; s < corr.scenario().setting_blocks(); ++s) {
    double sum = 0.0;
    for (std::size_t o = 0; o < ob; ++o) {
      const double v = corr[o + ob * s];
      if (!std::isfinite(v)) throw StructuralError("tensor has a non-finite entry");
      r.max_negativity = std::max(r.max_negativity, -v);
      sum += v;
    }
    r.max_normalization_residual = std::max(r.max_normalization_residual, std::abs(sum - 1.0));
  }
  r.ok = r.max_negativity <= tol && r.max_normalization_residual <= tol;
  return r;
}

namespace {

ConstraintReport check_families(const SequentialCorrelation& corr, const std::vector<detail::InvarianceFamily>& fams,
                                double tol) {
  ConstraintReport r;
  r.worst = "none";
  for (const auto& f : fams) {
    const double res = invariance_residual(corr, f.summed, f.varying);
    if (res > r.max_residual) {
      r.max_residual = res;
      r.worst = f.name;
    }
  }
  r.ok = r.max_residual <= tol;
  return r;
}

}  // namespace

ConstraintReport check_same_step_no_signaling(const SequentialCorrelation& corr, double tol) {
  return check_families(corr, detail::no_signaling_families(corr.scenario()), tol);
}

ConstraintReport check_arrow_of_time(const SequentialCorrelation& corr, double tol) {
  return check_families(corr, detail::arrow_of_time_families(corr.scenario()), tol);
}

SequentialCorrelation prefix_marginal(const SequentialCorrelation& corr, std::size_t steps) {
  const auto& sc = corr.scenario();
  if (steps < 1 || steps > sc.steps) throw StructuralError("prefix length out of range");
  const Scenario ps = sc.with_steps(steps);
  SequentialCorrelation out(ps);
  const std::size_t ob = sc.outcome_blocks();
  const std::size_t pob = ps.outcome_blocks();
  for (std::size_t s = 0; s < ps.setting_blocks(); ++s) {
    for (std::size_t o = 0; o < ob; ++o) out[o % pob + pob * s] += corr[o + ob * s];
  }
  return out;
}

SingleStepBox first_step_marginal(const SequentialCorrelation& corr, double tol) {
  require_binary(corr.scenario(), "first_step_marginal");
  const auto aot = check_arrow_of_time(corr, tol);
  if (!aot.ok) throw ConstraintViolation("arrow-of-time violated: " + aot.worst, aot.max_residual);
  const auto m = prefix_marginal(corr, 1);
  SingleStepBox box;
  std::copy(m.values().begin(), m.values().end(), box.p.begin());
  return box;
}

std::optional<SingleStepBox> conditional_box(const SequentialCorrelation& corr, const History& history,
                                             double /*tol*/) {
  const auto& sc = corr.scenario();
  require_binary(sc, "conditional_box");
  history.check(sc);
  if (history.length() + 1 > sc.steps) throw StructuralError("history too long for scenario");
  return conditional_from_marginal(prefix_marginal(corr, history.length() + 1), history);
}

Factorization factorize(const SequentialCorrelation& corr, double tol) {
  Factorization f;
  f.scenario = corr.scenario();
  f.first = first_step_marginal(corr, tol);
  for (std::size_t l = 1; l < corr.scenario().steps; ++l) {
    const auto marginal = prefix_marginal(corr, l + 1);
    for (const auto& h : History::all(corr.scenario(), l)) f.conditionals.emplace(h, conditional_from_marginal(marginal, h));
  }
  return f;
}

SequentialCorrelation compose(const SingleStepBox& first,
                              const std::map<History, std::optional<SingleStepBox>>& conditionals,
                              std::size_t steps) {
  const Scenario sc{steps, 2, 2};
  SequentialCorrelation out(sc);
  std::vector<StepRecord> rec;
  std::function<void(const SingleStepBox&, double)> descend = [&](const SingleStepBox& box, double weight) {
    const std::size_t level = rec.size();
    rec.push_back({});
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 2; ++x)
        for (int b = 0; b < 2; ++b)
          for (int a = 0; a < 2; ++a) {
            rec.back() = {a, b, x, y};
            const double w = weight * box(a, b, x, y);
            if (level + 1 == steps) {
              out[out.index_of(rec)] = w;
              continue;
            }
            if (w < kZeroHistoryThreshold) continue;
            const History h(rec);
            const auto it = conditionals.find(h);
            if (it == conditionals.end() || !it->second) {
              throw StructuralError("no conditional box for reachable history '" + h.key() + "'");
            }
            descend(*it->second, w);
          }
    rec.pop_back();
  };
  descend(first, 1.0);
  return out;
}

SequentialCorrelation compose(const SingleStepBox& first, const std::map<History, SingleStepBox>& conditionals,
                              std::size_t steps) {
  std::map<History, std::optional<SingleStepBox>> wrapped;
  for (const auto& [h, b] : conditionals) wrapped.emplace(h, b);
  return compose(first, wrapped, steps);
}

SequentialCorrelation compose(const Factorization& f) {
  require_binary(f.scenario, "compose");
  return compose(f.first, f.conditionals, f.scenario.steps);
}

double factor_signaling_residual(const Factorization& f) {
  double worst = signaling_residual(f.first);
  for (const auto& [h, box] : f.conditionals) {
    if (box) worst = std::max(worst, signaling_residual(*box));
  }
  return worst;
}

}  // namespace seqlocal
