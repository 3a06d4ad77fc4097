#include "seqlocal/scenario.hpp"

#include <charconv>

#include "seqlocal/errors.hpp"

namespace seqlocal {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

int parse_bit(std::string_view token, std::string_view whole) {
  int value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end || value < 0) {
    throw StructuralError("bad history key '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

void Scenario::check() const {
  if (steps < 1) throw StructuralError("scenario needs at least one step");
  if (settings < 2) throw StructuralError("scenario needs at least two settings");
  if (outcomes < 2) throw StructuralError("scenario needs at least two outcomes");
  // 2^26 entries is far beyond what any operation here can use. Multiply step by step so a
  // huge `steps` cannot wrap around.
  if (settings > 64 || outcomes > 64) throw StructuralError("scenario too large");
  const std::size_t per_step = outcomes * outcomes * settings * settings;
  std::size_t total = 1;
  for (std::size_t i = 0; i < steps; ++i) {
    if (per_step > (std::size_t{1} << 26) || total > (std::size_t{1} << 26) / per_step)
      throw StructuralError("scenario too large");
    total *= per_step;
  }
}

std::size_t Scenario::outcome_blocks() const { return ipow(outcomes * outcomes, steps); }

std::size_t Scenario::setting_blocks() const { return ipow(settings * settings, steps); }

std::size_t Scenario::outcome_stride(std::size_t step, Party p) const {
  return ipow(outcomes, 2 * step + static_cast<std::size_t>(p));
}

std::size_t Scenario::setting_stride(std::size_t step, Party p) const {
  return ipow(settings, 2 * step + static_cast<std::size_t>(p));
}

History History::extended(const StepRecord& r) const {
  auto s = steps_;
  s.push_back(r);
  return History(std::move(s));
}

void History::check(const Scenario& s) const {
  const int o = static_cast<int>(s.outcomes);
  const int st = static_cast<int>(s.settings);
  for (const auto& r : steps_) {
    if (r.a < 0 || r.a >= o || r.b < 0 || r.b >= o || r.x < 0 || r.x >= st || r.y < 0 || r.y >= st) {
      throw StructuralError("history '" + key() + "' out of range for scenario");
    }
  }
}

std::string History::key() const {
  std::string out;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (i) out += ';';
    const auto& r = steps_[i];
    out += std::to_string(r.a) + ',' + std::to_string(r.b) + ',' + std::to_string(r.x) + ',' +
           std::to_string(r.y);
  }
  return out;
}

History History::parse(std::string_view key) {
  std::vector<StepRecord> steps;
  if (key.empty()) return History{};
  std::size_t pos = 0;
  while (pos <= key.size()) {
    const auto semi = key.find(';', pos);
    const auto step = key.substr(pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos);
    int vals[4];
    std::size_t p = 0;
    for (int k = 0; k < 4; ++k) {
      const auto comma = step.find(',', p);
      if ((k < 3) == (comma == std::string_view::npos)) {
        throw StructuralError("bad history key '" + std::string(key) + "'");
      }
      vals[k] = parse_bit(step.substr(p, comma == std::string_view::npos ? std::string_view::npos : comma - p), key);
      p = comma + 1;
    }
    steps.push_back({vals[0], vals[1], vals[2], vals[3]});
    if (semi == std::string_view::npos) break;
    pos = semi + 1;
  }
  return History(std::move(steps));
}

std::vector<History> History::all(const Scenario& s, std::size_t length) {
  std::vector<History> out{History{}};
  for (std::size_t l = 0; l < length; ++l) {
    std::vector<History> next;
    next.reserve(out.size() * s.outcomes * s.outcomes * s.settings * s.settings);
    for (const auto& h : out) {
      for (int a = 0; a < static_cast<int>(s.outcomes); ++a)
        for (int b = 0; b < static_cast<int>(s.outcomes); ++b)
          for (int x = 0; x < static_cast<int>(s.settings); ++x)
            for (int y = 0; y < static_cast<int>(s.settings); ++y) next.push_back(h.extended({a, b, x, y}));
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace seqlocal
