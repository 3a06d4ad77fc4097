#pragma once

#include <string>
#include <vector>

#include "seqlocal/scenario.hpp"

namespace seqlocal::detail {

// Strides of the 2L outcome (resp. setting) slots, slot k = 2*step + party.
struct SlotLayout {
  std::vector<std::size_t> out_stride;
  std::vector<std::size_t> set_stride;
  std::size_t o;
  std::size_t s;

  explicit SlotLayout(const Scenario& sc) : o(sc.outcomes), s(sc.settings) {
    for (std::size_t j = 0; j < sc.steps; ++j) {
      for (Party p : {Party::Alice, Party::Bob}) {
        out_stride.push_back(sc.outcome_stride(j, p));
        set_stride.push_back(sc.setting_stride(j, p));
      }
    }
  }

  std::size_t zero_out(std::size_t idx, const std::vector<std::size_t>& slots) const {
    for (auto k : slots) idx -= ((idx / out_stride[k]) % o) * out_stride[k];
    return idx;
  }
  std::size_t zero_set(std::size_t idx, const std::vector<std::size_t>& slots) const {
    for (auto k : slots) idx -= ((idx / set_stride[k]) % s) * set_stride[k];
    return idx;
  }
};

// A family of linear constraints: summing the `summed` outcome slots leaves a marginal that
// must not change as the `varying` setting slots move away from 0.
struct InvarianceFamily {
  std::vector<std::size_t> summed;
  std::vector<std::size_t> varying;
  std::string name;
};

inline std::vector<std::size_t> later_slots(const Scenario& sc, std::size_t step) {
  std::vector<std::size_t> v;
  for (std::size_t k = 2 * (step + 1); k < 2 * sc.steps; ++k) v.push_back(k);
  return v;
}

inline std::vector<InvarianceFamily> no_signaling_families(const Scenario& sc) {
  std::vector<InvarianceFamily> out;
  for (std::size_t j = 0; j < sc.steps; ++j) {
    for (Party p : {Party::Alice, Party::Bob}) {
      auto slots = later_slots(sc, j);
      slots.push_back(2 * j + static_cast<std::size_t>(p));
      const bool alice = p == Party::Alice;
      out.push_back({slots, slots,
                     std::string(alice ? "Bob" : "Alice") + "'s step-" + std::to_string(j + 1) +
                         " marginal depends on " + (alice ? "Alice" : "Bob") + "'s setting"});
    }
  }
  return out;
}

inline std::vector<InvarianceFamily> arrow_of_time_families(const Scenario& sc) {
  std::vector<InvarianceFamily> out;
  for (std::size_t j = 0; j + 1 < sc.steps; ++j) {
    auto slots = later_slots(sc, j);
    out.push_back({slots, slots, "steps 1.." + std::to_string(j + 1) + " depend on later settings"});
  }
  return out;
}

}  // namespace seqlocal::detail
