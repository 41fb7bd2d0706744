#pragma once

// Dense finite Markov chains over Eigen matrices. A MarkovChain owns a
// validated row-stochastic kernel and lazily caches derived stationary data
// behind a shared, thread-safe initialization guard, so values stay cheap to
// copy and safe to share across threads.

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>
#include <vector>

#include "chainlab/errors.hpp"

namespace chainlab {

using Index = Eigen::Index;

template <typename Scalar = double>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar = double>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace config {
// Construction-time validation tolerance (row sums, masses).
inline constexpr double construction_tol = 1e-12;
// Verification tolerance for residual checks on solved quantities.
inline constexpr double verification_tol = 1e-10;
// Default total-variation threshold defining mixing-type times.
inline constexpr double default_epsilon = 0.25;
// Default separation threshold.
inline constexpr double separation_threshold = 0.75;
// Default stationary-mass level for worst-set hitting times.
inline constexpr double default_alpha = 0.25;
// Slack below which an inequality counts as violated.
inline constexpr double inequality_slack_tol = 1e-9;
// Default profile horizon for an n-state chain.
inline constexpr Index auto_horizon_factor = 64;

inline Index auto_horizon(Index n) { return auto_horizon_factor * n * n; }
}  // namespace config

// Total variation distance between two mass vectors of equal length.
template <typename DerA, typename DerB>
typename DerA::Scalar total_variation(const Eigen::MatrixBase<DerA>& a,
                                      const Eigen::MatrixBase<DerB>& b) {
  if (a.size() != b.size())
    throw DimensionError("total_variation: length mismatch");
  return (a.derived() - b.derived()).cwiseAbs().sum() /
         typename DerA::Scalar(2);
}

// A probability distribution on {0, ..., n-1}.
template <typename Scalar = double>
class Distribution {
 public:
  explicit Distribution(Vector<Scalar> w,
                        Scalar tol = Scalar(config::construction_tol))
      : w_(std::move(w)) {
    if (w_.size() == 0) throw ValidationError("Distribution: empty support");
    if ((w_.array() < Scalar(-1) * tol).any())
      throw ValidationError("Distribution: negative mass");
    if (std::abs(double(w_.sum() - Scalar(1))) > double(tol))
      throw ValidationError("Distribution: mass does not sum to one");
  }

  static Distribution point_mass(Index n, Index x) {
    if (x < 0 || x >= n) throw DimensionError("point_mass: state out of range");
    Vector<Scalar> w = Vector<Scalar>::Zero(n);
    w[x] = Scalar(1);
    return Distribution(std::move(w));
  }

  static Distribution uniform(Index n) {
    return Distribution(Vector<Scalar>::Constant(n, Scalar(1) / Scalar(n)));
  }

  Index size() const { return w_.size(); }
  const Vector<Scalar>& weights() const { return w_; }
  Scalar operator[](Index i) const { return w_[i]; }

 private:
  Vector<Scalar> w_;
};

template <typename Scalar>
Scalar total_variation(const Distribution<Scalar>& a,
                       const Distribution<Scalar>& b) {
  return total_variation(a.weights(), b.weights());
}

namespace detail {

// Strong connectivity of the positive support of P, by forward reachability
// from state 0 and reachability to state 0 (BFS on the reversed support).
template <typename Scalar>
bool strongly_connected(const Matrix<Scalar>& p) {
  const Index n = p.rows();
  auto reach = [&](bool forward) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Index> stack{0};
    seen[0] = 1;
    Index count = 1;
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index v = 0; v < n; ++v) {
        const Scalar w = forward ? p(u, v) : p(v, u);
        if (w > Scalar(0) && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reach(true) && reach(false);
}

}  // namespace detail

// An irreducible finite Markov chain with a row-stochastic kernel.
template <typename Scalar = double>
class MarkovChain {
 public:
  explicit MarkovChain(Matrix<Scalar> kernel,
                       Scalar tol = Scalar(config::construction_tol))
      : p_(std::move(kernel)), cache_(std::make_shared<Cache>()) {
    const Index n = p_.rows();
    if (n == 0 || p_.cols() != n)
      throw ValidationError("MarkovChain: kernel must be square and nonempty");
    if (!p_.allFinite())
      throw ValidationError("MarkovChain: kernel has non-finite entries");
    if ((p_.array() < Scalar(-1) * tol).any() ||
        (p_.array() > Scalar(1) + tol).any())
      throw ValidationError("MarkovChain: entries outside [0, 1]");
    for (Index i = 0; i < n; ++i) {
      const Scalar rs = p_.row(i).sum();
      if (std::abs(double(rs - Scalar(1))) > double(tol)) {
        std::ostringstream os;
        os << "MarkovChain: row " << i << " sums to " << double(rs);
        throw ValidationError(os.str());
      }
    }
    if (!detail::strongly_connected(p_))
      throw IrreducibilityError(
          "MarkovChain: support graph is not strongly connected");
  }

  Index size() const { return p_.rows(); }
  const Matrix<Scalar>& kernel() const { return p_; }
  Scalar operator()(Index i, Index j) const { return p_(i, j); }

  // Stationary row vector pi with pi P = pi, computed once on first use by a
  // direct dense solve: one balance equation is replaced by normalization.
  const Vector<Scalar>& stationary() const {
    std::call_once(cache_->stat_once, [&] {
      const Index n = p_.rows();
      Matrix<Scalar> a = p_.transpose() - Matrix<Scalar>::Identity(n, n);
      a.row(0).setOnes();
      Vector<Scalar> b = Vector<Scalar>::Zero(n);
      b[0] = Scalar(1);
      Vector<Scalar> pi = Eigen::PartialPivLU<Matrix<Scalar>>(a).solve(b);
      for (Index i = 0; i < n; ++i) {
        if (pi[i] < Scalar(0)) {
          if (double(pi[i]) < -config::verification_tol)
            throw NumericalError("stationary: solve produced negative mass");
          pi[i] = Scalar(0);
        }
      }
      const Scalar total = pi.sum();
      if (!(double(total) > 0.0))
        throw NumericalError("stationary: solve produced zero mass");
      pi /= total;
      const double residual =
          double((pi.transpose() * p_ - pi.transpose()).cwiseAbs().maxCoeff());
      if (residual > config::verification_tol)
        throw NumericalError("stationary: residual check failed");
      if (!(double(pi.minCoeff()) > 0.0))
        throw DegenerateStateError("stationary: state with zero mass");
      cache_->pi = std::move(pi);
    });
    return cache_->pi;
  }

  // Largest detailed-balance defect max |pi_x P(x,y) - pi_y P(y,x)|.
  Scalar reversibility_defect() const {
    std::call_once(cache_->rev_once, [&] {
      const Vector<Scalar>& pi = stationary();
      const Matrix<Scalar> flow = pi.asDiagonal() * p_;
      cache_->rev_defect = (flow - flow.transpose()).cwiseAbs().maxCoeff();
    });
    return cache_->rev_defect;
  }

  bool reversible(Scalar tol = Scalar(config::verification_tol)) const {
    return reversibility_defect() <= tol;
  }

 private:
  struct Cache {
    std::once_flag stat_once;
    std::once_flag rev_once;
    Vector<Scalar> pi;
    Scalar rev_defect{};
  };

  Matrix<Scalar> p_;
  std::shared_ptr<Cache> cache_;
};

using MarkovChaind = MarkovChain<double>;
using Distributiond = Distribution<double>;

template <typename Scalar>
Distribution<Scalar> stationary_distribution(const MarkovChain<Scalar>& mc) {
  return Distribution<Scalar>(mc.stationary());
}

// Half-speed chain (P + I) / 2.
template <typename Scalar>
MarkovChain<Scalar> lazy(const MarkovChain<Scalar>& mc) {
  const Index n = mc.size();
  Matrix<Scalar> q =
      (mc.kernel() + Matrix<Scalar>::Identity(n, n)) / Scalar(2);
  return MarkovChain<Scalar>(std::move(q));
}

// Time reversal with respect to the stationary distribution.
template <typename Scalar>
MarkovChain<Scalar> reversed_chain(const MarkovChain<Scalar>& mc) {
  const Vector<Scalar>& pi = mc.stationary();
  const Index n = mc.size();
  Matrix<Scalar> q(n, n);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) q(x, y) = pi[y] * mc(y, x) / pi[x];
  return MarkovChain<Scalar>(std::move(q));
}

template <typename Scalar>
bool is_reversible(const MarkovChain<Scalar>& mc,
                   Scalar tol = Scalar(config::verification_tol)) {
  return mc.reversible(tol);
}

// A sub-probability mass function on times {offset, offset+1, ...} with an
// explicit certified tail: masses sum to 1 - tail_mass.
template <typename Scalar = double>
class TimePmf {
 public:
  TimePmf(Index offset, Vector<Scalar> masses, Scalar tail_mass,
          Scalar tol = Scalar(config::construction_tol))
      : offset_(offset), masses_(std::move(masses)), tail_(tail_mass) {
    if (offset_ < 0) throw ValidationError("TimePmf: negative support");
    if (masses_.size() == 0) throw ValidationError("TimePmf: empty support");
    if ((masses_.array() < Scalar(-1) * tol).any() || tail_ < Scalar(-1) * tol)
      throw ValidationError("TimePmf: negative mass");
    if (std::abs(double(masses_.sum() + tail_ - Scalar(1))) > double(tol))
      throw ValidationError("TimePmf: mass plus tail does not sum to one");
  }

  // Deterministic time k.
  static TimePmf point(Index k) {
    return TimePmf(k, Vector<Scalar>::Ones(1), Scalar(0));
  }

  // Geometric law on {1, 2, ...} with mean t, truncated so the certified
  // tail is at most tail_cap. t = 1 degenerates to the point mass at 1.
  static TimePmf geometric(Scalar t, Scalar tail_cap = Scalar(1e-12)) {
    if (!(t >= Scalar(1)))
      throw ValidationError("TimePmf::geometric: mean must be at least one");
    if (t == Scalar(1)) return point(1);
    const Scalar q = Scalar(1) - Scalar(1) / t;
    const double len_d =
        std::ceil(std::log(double(tail_cap)) / std::log(double(q)));
    if (!(len_d > 0.0) || len_d > 1e8)
      throw TruncationError("TimePmf::geometric: truncation length exploded");
    const Index len = static_cast<Index>(len_d);
    Vector<Scalar> m(len);
    Scalar w = Scalar(1) / t;
    for (Index k = 0; k < len; ++k) {
      m[k] = w;
      w *= q;
    }
    // Exact remaining mass q^len, assigned to the tail.
    const Scalar tail = w * t;
    return TimePmf(1, std::move(m), tail);
  }

  // Uniform law on {1, ..., t}.
  static TimePmf uniform_range(Index t) {
    if (t < 1) throw ValidationError("TimePmf::uniform_range: t must be >= 1");
    return TimePmf(1, Vector<Scalar>::Constant(t, Scalar(1) / Scalar(t)),
                   Scalar(0));
  }

  Index offset() const { return offset_; }
  Index length() const { return masses_.size(); }
  Index last_time() const { return offset_ + masses_.size() - 1; }
  const Vector<Scalar>& masses() const { return masses_; }
  Scalar tail_mass() const { return tail_; }

  Scalar mass_at(Index t) const {
    if (t < offset_ || t > last_time()) return Scalar(0);
    return masses_[t - offset_];
  }

  // Mean of the truncated part; a lower bound for the true mean.
  Scalar truncated_mean() const {
    Scalar s = Scalar(0);
    for (Index k = 0; k < masses_.size(); ++k)
      s += Scalar(offset_ + k) * masses_[k];
    return s;
  }

  // Law of the sum of two independent times. Tail masses combine into the
  // certified tail of the result.
  TimePmf convolve(const TimePmf& other) const {
    const Index len = masses_.size() + other.masses_.size() - 1;
    Vector<Scalar> m = Vector<Scalar>::Zero(len);
    for (Index i = 0; i < masses_.size(); ++i)
      for (Index j = 0; j < other.masses_.size(); ++j)
        m[i + j] += masses_[i] * other.masses_[j];
    const Scalar tail = Scalar(1) - m.sum();
    return TimePmf(offset_ + other.offset_, std::move(m),
                   std::max(tail, Scalar(0)));
  }

 private:
  Index offset_;
  Vector<Scalar> masses_;
  Scalar tail_;
};

using TimePmfd = TimePmf<double>;

// Certified upper bound on the total variation distance between the laws two
// truncated pmfs represent: pointwise difference plus half of each tail.
template <typename Scalar>
Scalar total_variation_upper(const TimePmf<Scalar>& a, const TimePmf<Scalar>& b) {
  const Index lo = std::min(a.offset(), b.offset());
  const Index hi = std::max(a.last_time(), b.last_time());
  Scalar s = Scalar(0);
  for (Index t = lo; t <= hi; ++t)
    s += std::abs(double(a.mass_at(t) - b.mass_at(t)));
  return s / Scalar(2) + (a.tail_mass() + b.tail_mass()) / Scalar(2);
}

}  // namespace chainlab
