#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bao/complex_algebra.hpp"
#include "bao/errors.hpp"
#include "bao/suites.hpp"
#include "bao/term.hpp"

namespace bao {

/// How variable assignments are drawn when checking an equation.
/// Exhaustive mode enumerates every subset per variable and is limited to
/// small universes; random mode draws seeded uniform bit vectors, with the
/// per-equation stream derived from (seed, equation index) so batch results
/// do not depend on scheduling.
struct Strategy {
    enum class Mode { exhaustive, random };
    Mode mode = Mode::random;
    std::uint64_t samples = 1000;
    std::uint64_t seed = 0;

    static Strategy exhaustive() { return {Mode::exhaustive, 0, 0}; }
    static Strategy random(std::uint64_t samples, std::uint64_t seed) {
        return {Mode::random, samples, seed};
    }
};

constexpr std::size_t kExhaustiveMaxAtoms = 16;
constexpr std::size_t kExhaustiveMaxVars = 2;

struct Counterexample {
    Env env;
    std::vector<std::size_t> differing_atoms;

    std::string to_string() const {
        std::string out;
        for (const auto& [name, value] : env) {
            if (!out.empty()) out += " ";
            out += name + "=" + value.to_string();
        }
        out += out.empty() ? "atoms differ at " : "; atoms differ at ";
        for (std::size_t k = 0; k < differing_atoms.size() && k < 8; ++k) {
            if (k) out += ",";
            out += std::to_string(differing_atoms[k]);
        }
        if (differing_atoms.size() > 8) out += ",...";
        return out;
    }
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t eq_index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (eq_index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::optional<Counterexample> evaluate_env(const Equation& eq, const ComplexAlgebra& a,
                                                  const Env& env) {
    const Element l = eval_term(eq.lhs, env, a);
    const Element r = eval_term(eq.rhs, env, a);
    if (l == r) return std::nullopt;
    Counterexample ce;
    ce.env = env;
    ce.differing_atoms = (l ^ r).members();
    return ce;
}

} // namespace detail

/// Check one ground equation.  Returns nullopt on pass; a counterexample is
/// re-evaluated from scratch before it is reported.
inline std::optional<Counterexample> check_equation(const Equation& eq, const ComplexAlgebra& a,
                                                    const Strategy& strat,
                                                    std::uint64_t eq_index = 0) {
    if (!eq.ground())
        throw invalid_parameter("check_equation: schema must be expanded before checking");
    const auto vars = eq.free_variables();

    auto finish = [&](Counterexample ce) -> std::optional<Counterexample> {
        const auto again = detail::evaluate_env(eq, a, ce.env);
        if (!again || again->differing_atoms != ce.differing_atoms)
            throw std::logic_error("check_equation: counterexample failed re-verification");
        return ce;
    };

    if (strat.mode == Strategy::Mode::exhaustive) {
        if (a.atom_count() > kExhaustiveMaxAtoms)
            throw resource_limit("check_equation: exhaustive mode limited to " +
                                 std::to_string(kExhaustiveMaxAtoms) + " atoms");
        if (vars.size() > kExhaustiveMaxVars)
            throw resource_limit("check_equation: exhaustive mode limited to " +
                                 std::to_string(kExhaustiveMaxVars) + " free variables");
        const std::uint64_t space = std::uint64_t{1} << a.atom_count();
        Env env;
        for (const auto& v : vars) env.push_back({v, a.bottom()});
        if (vars.empty()) {
            if (auto ce = detail::evaluate_env(eq, a, env)) return finish(std::move(*ce));
            return std::nullopt;
        }
        for (std::uint64_t m0 = 0; m0 < space; ++m0) {
            env[0].second = a.from_words({m0});
            if (vars.size() == 1) {
                if (auto ce = detail::evaluate_env(eq, a, env)) return finish(std::move(*ce));
                continue;
            }
            for (std::uint64_t m1 = 0; m1 < space; ++m1) {
                env[1].second = a.from_words({m1});
                if (auto ce = detail::evaluate_env(eq, a, env)) return finish(std::move(*ce));
            }
        }
        return std::nullopt;
    }

    std::mt19937_64 rng(detail::mix_seed(strat.seed, eq_index));
    const std::size_t words = (a.atom_count() + 63) / 64;
    for (std::uint64_t round = 0; round < std::max<std::uint64_t>(strat.samples, 1); ++round) {
        Env env;
        for (const auto& v : vars) {
            std::vector<std::uint64_t> bits(words);
            for (auto& w : bits) w = rng();
            env.push_back({v, a.from_words(bits)});
        }
        if (auto ce = detail::evaluate_env(eq, a, env)) return finish(std::move(*ce));
    }
    return std::nullopt;
}

} // namespace bao
