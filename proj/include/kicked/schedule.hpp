#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kicked/rng.hpp"

namespace kicked {

// Deterministic kick schedule: produces the i-th kick (i >= 1) of a sequential
// system. Every rule is a pure function of its parameters and the index, so
// replaying a schedule always yields the same kicks and seeded rules are
// reproducible from (seed, i) alone.
template <class Element>
class KickSchedule {
 public:
  KickSchedule() = default;

  static KickSchedule cycled(std::vector<Element> kicks) {
    if (kicks.empty()) throw std::invalid_argument("KickSchedule: empty kick list");
    auto list = std::make_shared<std::vector<Element>>(std::move(kicks));
    return KickSchedule("cycled[" + std::to_string(list->size()) + "]",
                        [list](std::uint64_t i) { return (*list)[(i - 1) % list->size()]; });
  }

  static KickSchedule constant(Element kick) {
    return KickSchedule("constant", [kick = std::move(kick)](std::uint64_t) { return kick; });
  }

  static KickSchedule closed_form(std::string label, std::function<Element(std::uint64_t)> fn) {
    return KickSchedule(std::move(label), std::move(fn));
  }

  // i-th kick drawn from a fixed generator set by a position-indexed stream
  static KickSchedule seeded(std::uint64_t seed, std::vector<Element> generators) {
    if (generators.empty()) throw std::invalid_argument("KickSchedule: empty generator set");
    auto set = std::make_shared<std::vector<Element>>(std::move(generators));
    return KickSchedule("seeded[" + std::to_string(seed) + "]", [set, seed](std::uint64_t i) {
      return (*set)[stream_u64(seed, i) % set->size()];
    });
  }

  Element at(std::uint64_t i) const {
    if (!fn_) throw std::logic_error("KickSchedule: unset");
    return fn_(i);
  }

  const std::string& label() const { return label_; }

 private:
  KickSchedule(std::string label, std::function<Element(std::uint64_t)> fn)
      : label_(std::move(label)), fn_(std::move(fn)) {}

  std::string label_;
  std::function<Element(std::uint64_t)> fn_;
};

}  // namespace kicked
