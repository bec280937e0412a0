#include "espresso/synthetic.hpp"

#include "espresso/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>

namespace espresso {

namespace {

// Draws built directly on mt19937_64 output, whose sequence the standard
// fixes, so fixtures are identical across standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return lo + std::size_t(engine_() % std::uint64_t(hi - lo + 1));
  }
  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

enum class Wave { sine, sawtooth, pulse, double_sine };

struct ChannelParams {
  double level = 0.0;
  double amplitude = 1.0;
  double period = 20.0;
  double phase = 0.0;
  Wave wave = Wave::sine;
  double slope = 0.0;
  double noise_scale = 1.0;
};

double wave_value(Wave w, double cycles) {
  const double frac = cycles - std::floor(cycles);
  switch (w) {
  case Wave::sine: return std::sin(2.0 * std::numbers::pi * frac);
  case Wave::sawtooth: return 2.0 * frac - 1.0;
  case Wave::pulse: return frac < 0.3 ? 1.0 : -0.4;
  case Wave::double_sine:
    return 0.7 * std::sin(2.0 * std::numbers::pi * frac) +
           0.5 * std::sin(4.0 * std::numbers::pi * frac);
  }
  return 0.0;
}

ChannelParams draw_params(Rng& rng, const SyntheticSpec& spec) {
  ChannelParams p;
  if (spec.repetition == Repetition::R) {
    p.level = rng.uniform(-1.5, 1.5);
    p.amplitude = rng.uniform(0.6, 1.4);
    p.period = double(rng.index(spec.min_period, spec.max_period));
    p.phase = rng.uniform();
    p.wave = Wave(rng.index(0, 3));
  } else {
    p.level = rng.uniform(-2.0, 2.0);
    // Ramps change by at most ~0.6 over a typical segment.
    p.slope = rng.uniform() < 0.5 ? 0.0 : rng.uniform(-0.6, 0.6) / double(spec.max_segment);
    p.noise_scale = rng.uniform() < 0.5 ? 1.0 : 3.0;
  }
  return p;
}

double clean_value(const ChannelParams& p, Repetition rep, double t, double seg_start) {
  const double local = t - seg_start;
  if (rep == Repetition::R) return p.level + p.amplitude * wave_value(p.wave, local / p.period + p.phase);
  return p.level + p.slope * local;
}

} // namespace

void SyntheticSpec::validate() const {
  if (segments < 2) throw Error(ErrorCode::InvalidConfig, "need at least 2 segments");
  if (channels < 1) throw Error(ErrorCode::InvalidConfig, "need at least 1 channel");
  if (min_segment < 4 || min_segment > max_segment) {
    throw Error(ErrorCode::InvalidConfig, "segment length range is invalid");
  }
  if (min_period < 2 || min_period > max_period) {
    throw Error(ErrorCode::InvalidConfig, "motif period range is invalid");
  }
  if (continuity == Continuity::C && transition >= min_segment) {
    throw Error(ErrorCode::InvalidConfig, "transition ramp must be shorter than a segment");
  }
  if (!(noise >= 0.0)) throw Error(ErrorCode::InvalidConfig, "noise must be non-negative");
  if (!(sample_rate_hz > 0.0)) throw Error(ErrorCode::InvalidConfig, "sample rate must be positive");
  if (classes) {
    if (classes->size() != segments) {
      throw Error(ErrorCode::InvalidConfig, "class list length must equal segment count");
    }
    for (std::size_t i = 1; i < classes->size(); ++i) {
      if ((*classes)[i] == (*classes)[i - 1]) {
        throw Error(ErrorCode::InvalidConfig, "adjacent segments must differ in class");
      }
    }
  }
  for (std::size_t j : noise_channels) {
    if (j >= channels) throw Error(ErrorCode::InvalidConfig, "noise channel out of range");
  }
  if (noise_channels.size() >= channels) {
    throw Error(ErrorCode::InvalidConfig, "at least one channel must carry structure");
  }
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  std::vector<std::size_t> classes;
  if (spec.classes) {
    classes = *spec.classes;
  } else {
    for (std::size_t i = 0; i < spec.segments; ++i) classes.push_back(i);
  }
  const std::size_t n_classes = *std::max_element(classes.begin(), classes.end()) + 1;

  auto structured = [&](std::size_t j) {
    return std::find(spec.noise_channels.begin(), spec.noise_channels.end(), j) ==
           spec.noise_channels.end();
  };

  // Class parameters; adjacent classes must differ in level by at least 0.6
  // on some structured channel.
  std::vector<std::vector<ChannelParams>> params(n_classes,
                                                 std::vector<ChannelParams>(spec.channels));
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      for (auto& p : params[c]) p = draw_params(rng, spec);
      bool separated = true;
      for (std::size_t i = 1; i < classes.size(); ++i) {
        const std::size_t a = classes[i - 1];
        const std::size_t b = classes[i];
        if (std::max(a, b) != c) continue;
        const std::size_t other = a == c ? b : a;
        bool differs = false;
        for (std::size_t j = 0; j < spec.channels; ++j) {
          if (structured(j) && std::abs(params[c][j].level - params[other][j].level) >= 0.6) {
            differs = true;
          }
        }
        separated = separated && differs;
      }
      if (separated) break;
    }
  }

  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < spec.segments; ++i) {
    starts.push_back(starts.back() + rng.index(spec.min_segment, spec.max_segment));
  }
  const std::size_t n = starts.back();
  const std::size_t half = spec.continuity == Continuity::C ? spec.transition / 2 : 0;

  SyntheticData out;
  out.truth.assign(starts.begin() + 1, starts.end() - 1);
  out.labels.resize(n);
  std::vector<std::vector<double>> rows(spec.channels, std::vector<double>(n));
  for (std::size_t s = 0; s < spec.segments; ++s) {
    for (std::size_t t = starts[s]; t < starts[s + 1]; ++t) out.labels[t] = classes[s];
  }

  for (std::size_t j = 0; j < spec.channels; ++j) {
    for (std::size_t s = 0; s < spec.segments; ++s) {
      for (std::size_t t = starts[s]; t < starts[s + 1]; ++t) {
        if (!structured(j)) {
          rows[j][t] = rng.normal();
          continue;
        }
        const ChannelParams& p = params[classes[s]][j];
        double value = clean_value(p, spec.repetition, double(t), double(starts[s]));
        double sigma = spec.noise * p.noise_scale;

        // Blend with the neighbouring segment inside a transition ramp.
        if (half > 0) {
          const double ramp = double(2 * half);
          if (s + 1 < spec.segments && t + half >= starts[s + 1]) {
            const ChannelParams& q = params[classes[s + 1]][j];
            const double w = double(t + half - starts[s + 1]) / ramp;
            value = (1.0 - w) * value +
                    w * clean_value(q, spec.repetition, double(t), double(starts[s + 1]));
            sigma = (1.0 - w) * sigma + w * spec.noise * q.noise_scale;
          } else if (s > 0 && t < starts[s] + half) {
            const ChannelParams& q = params[classes[s - 1]][j];
            const double w = double(starts[s] + half - t) / ramp;
            value = (1.0 - w) * value +
                    w * clean_value(q, spec.repetition, double(t), double(starts[s - 1]));
            sigma = (1.0 - w) * sigma + w * spec.noise * q.noise_scale;
          }
        }
        rows[j][t] = value + sigma * rng.normal();
      }
    }
  }

  out.series = validate_series(rows, {}, spec.sample_rate_hz);
  return out;
}

void parse_regime(const std::string& text, Continuity& continuity, Repetition& repetition) {
  std::string t;
  for (char ch : text) t.push_back(char(std::toupper(static_cast<unsigned char>(ch))));
  std::replace(t.begin(), t.end(), '_', '-');
  const auto dash = t.find('-');
  if (dash == std::string::npos) throw Error(ErrorCode::InvalidConfig, "regime '" + text + "'");
  const std::string c = t.substr(0, dash);
  const std::string r = t.substr(dash + 1);
  if (c == "C") continuity = Continuity::C;
  else if (c == "NC") continuity = Continuity::NC;
  else throw Error(ErrorCode::InvalidConfig, "regime '" + text + "'");
  if (r == "R") repetition = Repetition::R;
  else if (r == "NR") repetition = Repetition::NR;
  else throw Error(ErrorCode::InvalidConfig, "regime '" + text + "'");
}

std::string regime_name(Continuity continuity, Repetition repetition) {
  return std::string(continuity == Continuity::C ? "C" : "NC") + "-" +
         (repetition == Repetition::R ? "R" : "NR");
}

} // namespace espresso
