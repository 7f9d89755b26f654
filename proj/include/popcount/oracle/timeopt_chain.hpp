#pragma once

#include "../error.hpp"
#include "../protocols.hpp"
#include "rational.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace popcount::oracle
{
    // Smallest integer streak length that satisfies cnt >= 6(c ln c + 1).
    inline std::uint64_t streak_length(std::uint64_t c) { return static_cast<std::uint64_t>(std::ceil(streak_threshold(c))); }

    /// Exact expected BST interactions for the phased protocol to first reach c = n
    /// under BST-only uniform scheduling.
    ///
    /// The chain is lumped by the number of 1-marked agents, since a transition depends
    /// only on the chosen agent's mark and the BST record. The streak counter is
    /// eliminated analytically: while a streak runs the lumped state is frozen, so the
    /// run of counter values from 0 to the threshold is a geometric ladder that either
    /// drops out through a phase-mark agent or ends with a phase switch. This leaves one
    /// unknown per (ones, c0, c1, phase) at cnt = 0, solved by exact Gaussian elimination.
    class TimeOptChain
    {
    public:
        static constexpr unsigned max_n = 4;

        explicit TimeOptChain(unsigned n) : n_(n)
        {
            if (n == 0)
                throw std::invalid_argument("timeopt chain: n must be >= 1");
            if (n > max_n)
                throw intractable("exact phased-protocol solve supports n <= " + std::to_string(max_n));
            for (unsigned ones = 0; ones <= n; ++ones)
                index_of({ones, 0, 0, 0});
            build();
            solve();
        }

        unsigned n() const noexcept { return n_; }

        // Expected time from a fresh BST with `ones` agents marked 1.
        const ExactRational& expected_from(unsigned ones) const
        {
            if (ones > n_)
                throw std::invalid_argument("ones exceeds n");
            return value_.at(states_.at(State{ones, 0, 0, 0}));
        }

        // Average over all 2^n initial mark vectors.
        ExactRational expected_uniform_start() const
        {
            ExactRational out = 0;
            for (unsigned ones = 0; ones <= n_; ++ones)
                out += ExactRational(binomial(n_, ones)) * expected_from(ones);
            return out / ExactRational(BigInt(1) << n_);
        }

        std::size_t state_count() const noexcept { return order_.size(); }

    private:
        struct State
        {
            unsigned ones;
            std::uint64_t c0;
            std::uint64_t c1;
            unsigned phase;

            auto key() const { return std::tie(ones, c0, c1, phase); }
            bool operator<(const State& o) const { return key() < o.key(); }
        };

        bool absorbing(const State& s) const { return s.c0 + s.c1 == n_; }

        std::size_t index_of(const State& s)
        {
            auto [it, inserted] = states_.emplace(s, order_.size());
            if (inserted)
            {
                order_.push_back(s);
                pending_.push_back(it->second);
            }
            return it->second;
        }

        // Successor after the BST meets an agent marked `phase` (with cnt reset to 0).
        static State convert(State s)
        {
            const unsigned b = s.phase;
            TimeOptBst bst{s.c0, s.c1, s.c0 + s.c1, 0, s.phase};
            unsigned mark = b;
            timeopt_apply(bst, mark);
            s.c0 = bst.c0;
            s.c1 = bst.c1;
            s.ones = b == 0 ? s.ones + 1 : s.ones - 1;
            return s;
        }

        // One linear row per state: x_s - sum coeff * x_t = rhs.
        struct Row
        {
            std::map<std::size_t, ExactRational> coeff;
            ExactRational rhs = 0;
        };

        void build()
        {
            while (!pending_.empty())
            {
                const std::size_t id = pending_.back();
                pending_.pop_back();
                const State s = order_[id];
                if (rows_.size() <= id)
                    rows_.resize(id + 1);
                Row row;
                if (absorbing(s))
                {
                    rows_[id] = std::move(row);
                    continue;
                }
                const unsigned phase_marked = s.phase == 0 ? n_ - s.ones : s.ones;
                const ExactRational p(phase_marked, n_);
                const ExactRational q = 1 - p;
                const std::uint64_t c_phase = s.phase == 0 ? s.c0 : s.c1;
                const std::uint64_t c_other = s.phase == 0 ? s.c1 : s.c0;

                if (c_phase > 0)
                {
                    // Other-mark agents are null; the cnt = 0 state waits for a phase-marked agent.
                    if (phase_marked == 0)
                        throw std::logic_error("unreachable lumped state: c_phase > 0 with no phase-marked agent");
                    const std::size_t next = index_of(convert(s));
                    row.rhs = 1 / p;
                    row.coeff[next] += 1;
                }
                else
                {
                    // Streak ladder cnt = 0..T; at cnt = T the next other-mark agent switches phase.
                    const std::uint64_t t = streak_length(c_other);
                    ExactRational geometric = 0; // sum_{j=0}^{T} q^j
                    ExactRational qpow = 1;
                    for (std::uint64_t j = 0; j <= t; ++j)
                    {
                        geometric += qpow;
                        qpow *= q;
                    }
                    row.rhs = geometric;
                    if (phase_marked > 0)
                    {
                        const std::size_t next = index_of(convert(s));
                        row.coeff[next] += geometric * p;
                    }
                    if (q != 0)
                    {
                        State switched = s;
                        switched.phase = 1 - s.phase;
                        const std::size_t next = index_of(switched);
                        row.coeff[next] += qpow;
                    }
                }
                rows_[id] = std::move(row);
            }
            rows_.resize(order_.size());
        }

        void solve()
        {
            const std::size_t m = order_.size();
            std::vector<std::vector<ExactRational>> a(m, std::vector<ExactRational>(m + 1, ExactRational(0)));
            for (std::size_t i = 0; i < m; ++i)
            {
                a[i][i] = 1;
                for (const auto& [j, c] : rows_[i].coeff)
                    a[i][j] -= c;
                a[i][m] = rows_[i].rhs;
            }
            for (std::size_t col = 0; col < m; ++col)
            {
                std::size_t piv = col;
                while (piv < m && a[piv][col] == 0)
                    ++piv;
                if (piv == m)
                    throw std::logic_error("singular hitting-time system");
                std::swap(a[piv], a[col]);
                const ExactRational inv = 1 / a[col][col];
                for (std::size_t k = col; k <= m; ++k)
                    a[col][k] *= inv;
                for (std::size_t r = 0; r < m; ++r)
                {
                    if (r == col || a[r][col] == 0)
                        continue;
                    const ExactRational f = a[r][col];
                    for (std::size_t k = col; k <= m; ++k)
                    {
                        if (a[col][k] != 0)
                            a[r][k] -= f * a[col][k];
                    }
                }
            }
            value_.resize(m);
            for (std::size_t i = 0; i < m; ++i)
                value_[i] = a[i][m];
        }

        unsigned n_;
        std::map<State, std::size_t> states_;
        std::vector<State> order_;
        std::vector<std::size_t> pending_;
        std::vector<Row> rows_;
        std::vector<ExactRational> value_;
    };

    /// Expected BST interactions to reach c = n, averaged over the 2^n initial mark vectors.
    inline ExactRational timeopt_exact_expected(unsigned n) { return TimeOptChain(n).expected_uniform_start(); }
} // namespace popcount::oracle
