#pragma once

#include "gerber/multivector.hpp"

#include <cstdint>
#include <random>

namespace gerber {

/// Deterministic source of random test data.  All draws reduce the raw
/// mt19937_64 stream with explicit modulo arithmetic instead of
/// std::uniform_int_distribution, whose output is implementation-defined;
/// fixed seeds therefore reproduce identical inputs everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : eng_() % bound; }

    long integer(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    Rational rational(long max_abs_num = 9, long max_den = 4) {
        const long n = integer(-max_abs_num, max_abs_num);
        const long d = integer(1, max_den);
        return Rational(BigInt(n), BigInt(d));
    }

    Rational nonzero_rational(long max_abs_num = 9, long max_den = 4) {
        while (true) {
            Rational r = rational(max_abs_num, max_den);
            if (!r.is_zero()) return r;
        }
    }

    /// Random polynomial of total degree <= max_degree (may come out zero).
    Scalar scalar(std::size_t num_vars, long max_degree, int max_terms = 3) {
        Scalar out(num_vars);
        const int nterms = static_cast<int>(integer(1, max_terms));
        for (int t = 0; t < nterms; ++t) {
            Monomial m(num_vars, 0);
            if (num_vars > 0) {
                const long deg = integer(0, max_degree);
                for (long d = 0; d < deg; ++d) m[below(num_vars)] += 1;
            }
            out.add_term(m, rational());
        }
        return out;
    }

    Scalar nonzero_scalar(std::size_t num_vars, long max_degree, int max_terms = 3) {
        while (true) {
            Scalar s = scalar(num_vars, max_degree, max_terms);
            if (!s.is_zero()) return s;
        }
    }

    /// Random homogeneous element of the given exterior degree.
    template <typename Tag>
    GradedElement<Tag> element(std::uint32_t rank, std::size_t num_vars, std::size_t degree,
                               long max_poly_degree, int max_terms = 3) {
        GradedElement<Tag> out(rank, num_vars);
        if (degree > rank) return out;
        const int nterms = static_cast<int>(integer(1, max_terms));
        for (int t = 0; t < nterms; ++t) {
            // draw `degree` distinct indices from 1..rank
            std::vector<std::uint32_t> pool(rank);
            for (std::uint32_t i = 0; i < rank; ++i) pool[i] = i + 1;
            std::vector<std::uint32_t> picked;
            for (std::size_t d = 0; d < degree; ++d) {
                const std::size_t at = below(pool.size());
                picked.push_back(pool[at]);
                pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
            }
            std::sort(picked.begin(), picked.end());
            out.add_term(FrameIndexSet(std::move(picked)), scalar(num_vars, max_poly_degree));
        }
        return out;
    }

    MultiVector multivector(std::uint32_t rank, std::size_t num_vars, std::size_t degree,
                            long max_poly_degree, int max_terms = 3) {
        return element<PrimalFrame>(rank, num_vars, degree, max_poly_degree, max_terms);
    }

    Form form(std::uint32_t rank, std::size_t num_vars, std::size_t degree, long max_poly_degree,
              int max_terms = 3) {
        return element<DualFrame>(rank, num_vars, degree, max_poly_degree, max_terms);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace gerber
