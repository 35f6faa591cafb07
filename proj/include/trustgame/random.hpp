#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <deque>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace trustgame {

/// What the agent and the trustee need from a generator: u in [0,1) and a
/// Beta(a, b) variate.
template <class R>
concept RandomSource = requires(R& rng, double a, double b) {
    { rng.uniform() } -> std::convertible_to<double>;
    { rng.beta(a, b) } -> std::convertible_to<double>;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of agent `agent_index` in a batch: splitmix64(base_seed ^ splitmix64(agent_index)).
/// Stable across releases; changing it changes every recorded run.
constexpr std::uint64_t child_seed(std::uint64_t base_seed, std::uint64_t agent_index) {
    return splitmix64(base_seed ^ splitmix64(agent_index));
}

/// mt19937_64 plus hand-written transforms. The standard library's
/// distributions are implementation-defined, these are not, so a seed
/// reproduces the same stream on every toolchain.
class SeededSource {
public:
    explicit SeededSource(std::uint64_t seed) : engine_(seed) {}

    /// 53 random mantissa bits: u in [0,1), never 1.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double x, y, s;
        do {
            x = 2.0 * uniform() - 1.0;
            y = 2.0 * uniform() - 1.0;
            s = x * x + y * y;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = y * scale;
        has_spare_ = true;
        return x * scale;
    }

    /// Gamma(shape, 1) by Marsaglia-Tsang; shapes below 1 use the u^(1/a) boost.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::domain_error("gamma shape must be positive");
        if (shape < 1.0) {
            double u;
            do u = uniform();
            while (u == 0.0);
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Returns pre-set draws in order; for tests that force a specific u or beta.
class ScriptedSource {
public:
    ScriptedSource() = default;
    ScriptedSource(std::vector<double> uniforms, std::vector<double> betas)
        : uniforms_(uniforms.begin(), uniforms.end()), betas_(betas.begin(), betas.end()) {}

    void push_uniform(double u) { uniforms_.push_back(u); }
    void push_beta(double b) { betas_.push_back(b); }

    double uniform() { return pop(uniforms_, "uniform"); }
    double beta(double, double) { return pop(betas_, "beta"); }

    bool exhausted() const { return uniforms_.empty() && betas_.empty(); }

private:
    static double pop(std::deque<double>& queue, const char* what) {
        if (queue.empty()) throw std::logic_error(std::string("scripted ") + what + " draws exhausted");
        const double v = queue.front();
        queue.pop_front();
        return v;
    }

    std::deque<double> uniforms_;
    std::deque<double> betas_;
};

/// Forwards to another source and keeps every draw so it can be replayed
/// through a ScriptedSource.
template <RandomSource Inner>
class RecordingSource {
public:
    explicit RecordingSource(Inner& inner) : inner_(inner) {}

    double uniform() {
        const double u = inner_.uniform();
        uniforms_.push_back(u);
        return u;
    }

    double beta(double a, double b) {
        const double v = inner_.beta(a, b);
        betas_.push_back(v);
        return v;
    }

    ScriptedSource replay() const { return ScriptedSource(uniforms_, betas_); }

private:
    Inner& inner_;
    std::vector<double> uniforms_;
    std::vector<double> betas_;
};

}  // namespace trustgame
