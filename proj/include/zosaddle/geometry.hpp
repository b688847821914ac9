#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "zosaddle/random.hpp"

namespace zosaddle {

using Vec = std::vector<double>;

// ---------------------------------------------------------------------------
// small vector helpers
// ---------------------------------------------------------------------------

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

inline double norm2_sq(std::span<const double> v) { return dot(v, v); }

inline bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// norm exponents
// ---------------------------------------------------------------------------

/// Dual-norm exponent q in [2, inf).  The simplex/entropy case works with the
/// max-norm, represented by an explicit infinity tag so the semantics are
/// exact rather than "very large float".
class NormExponent {
public:
    static NormExponent finite(double q) {
        if (!(q >= 1.0) || !std::isfinite(q))
            throw std::invalid_argument("norm exponent must be finite and >= 1");
        return NormExponent(q, false);
    }
    static NormExponent infinity() { return NormExponent(0.0, true); }

    bool is_infinite() const { return inf_; }
    double value() const { return v_; }

    bool operator==(const NormExponent& o) const {
        return inf_ == o.inf_ && (inf_ || v_ == o.v_);
    }

private:
    NormExponent(double v, bool inf) : v_(v), inf_(inf) {}
    double v_;
    bool inf_;
};

/// ||v||_p for finite p >= 1 (used with the primal exponent p in [1,2]).
inline double norm_p(double p, std::span<const double> v) {
    if (!(p >= 1.0)) throw std::invalid_argument("norm_p: p must be >= 1");
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x) / m, p);
    return m * std::pow(s, 1.0 / p);
}

/// ||v||_q; the infinity tag yields max_i |v_i|.
inline double dual_norm(const NormExponent& q, std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    if (q.is_infinite() || m == 0.0) return m;
    double qq = q.value();
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x) / m, qq);
    return m * std::pow(s, 1.0 / qq);
}

/// Geometry factor rho_n = min{q - 1, 16 ln(n) - 8}; the infinity-limit q
/// keeps only the log term.
inline double rho_n(const NormExponent& q, std::size_t n) {
    if (n < 2) throw std::invalid_argument("rho_n: n must be >= 2");
    double log_term = 16.0 * std::log(static_cast<double>(n)) - 8.0;
    if (q.is_infinite()) return log_term;
    return std::min(q.value() - 1.0, log_term);
}

// ---------------------------------------------------------------------------
// feasible sets
// ---------------------------------------------------------------------------

struct SimplexBlock {
    std::size_t dim = 0;
};
struct BoxBlock {
    Vec lower, upper;
};
struct Ball2Block {
    Vec center;
    double radius = 0.0;
};
struct FreeBlock {
    std::size_t dim = 0;
};

using SetBlock = std::variant<SimplexBlock, BoxBlock, Ball2Block, FreeBlock>;

inline std::size_t block_dim(const SetBlock& b) {
    return std::visit(
        [](const auto& v) -> std::size_t {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SimplexBlock> || std::is_same_v<T, FreeBlock>)
                return v.dim;
            else if constexpr (std::is_same_v<T, BoxBlock>)
                return v.lower.size();
            else
                return v.center.size();
        },
        b);
}

inline bool block_contains(const SetBlock& b, std::span<const double> v, double tol) {
    return std::visit(
        [&](const auto& blk) -> bool {
            using T = std::decay_t<decltype(blk)>;
            if constexpr (std::is_same_v<T, SimplexBlock>) {
                double s = 0.0;
                for (double x : v) {
                    if (x < -tol) return false;
                    s += x;
                }
                return std::abs(s - 1.0) <= std::max(tol, 1e-12);
            } else if constexpr (std::is_same_v<T, BoxBlock>) {
                for (std::size_t i = 0; i < v.size(); ++i)
                    if (v[i] < blk.lower[i] - tol || v[i] > blk.upper[i] + tol) return false;
                return true;
            } else if constexpr (std::is_same_v<T, Ball2Block>) {
                double s = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    double d = v[i] - blk.center[i];
                    s += d * d;
                }
                return std::sqrt(s) <= blk.radius + tol;
            } else {
                return true;
            }
        },
        b);
}

/// Euclidean projection onto the probability simplex (sort-based pivot).
inline void project_simplex(std::span<double> v) {
    Vec u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumsum = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cumsum += u[j];
        double t = (cumsum - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) theta = t;
    }
    for (double& x : v) x = std::max(x - theta, 0.0);
}

/// Euclidean projection onto a single block, in place.
inline void project_block(const SetBlock& b, std::span<double> v) {
    std::visit(
        [&](const auto& blk) {
            using T = std::decay_t<decltype(blk)>;
            if constexpr (std::is_same_v<T, SimplexBlock>) {
                project_simplex(v);
            } else if constexpr (std::is_same_v<T, BoxBlock>) {
                for (std::size_t i = 0; i < v.size(); ++i)
                    v[i] = std::clamp(v[i], blk.lower[i], blk.upper[i]);
            } else if constexpr (std::is_same_v<T, Ball2Block>) {
                double s = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    double d = v[i] - blk.center[i];
                    s += d * d;
                }
                double r = std::sqrt(s);
                if (r > blk.radius) {
                    double scale = blk.radius / r;
                    for (std::size_t i = 0; i < v.size(); ++i)
                        v[i] = blk.center[i] + scale * (v[i] - blk.center[i]);
                }
            }
            // FreeBlock: identity
        },
        b);
}

/// Center point of a block: uniform distribution on a simplex, midpoint of a
/// box, center of a ball, origin for the unconstrained case.
inline Vec block_center(const SetBlock& b) {
    return std::visit(
        [](const auto& blk) -> Vec {
            using T = std::decay_t<decltype(blk)>;
            if constexpr (std::is_same_v<T, SimplexBlock>) {
                return Vec(blk.dim, 1.0 / static_cast<double>(blk.dim));
            } else if constexpr (std::is_same_v<T, BoxBlock>) {
                Vec c(blk.lower.size());
                for (std::size_t i = 0; i < c.size(); ++i)
                    c[i] = 0.5 * (blk.lower[i] + blk.upper[i]);
                return c;
            } else if constexpr (std::is_same_v<T, Ball2Block>) {
                return blk.center;
            } else {
                return Vec(blk.dim, 0.0);
            }
        },
        b);
}

/// Euclidean diameter of a block (sup of pairwise distances); unconstrained
/// blocks report 0 so callers can detect "unbounded".
inline double block_diameter2(const SetBlock& b) {
    return std::visit(
        [](const auto& blk) -> double {
            using T = std::decay_t<decltype(blk)>;
            if constexpr (std::is_same_v<T, SimplexBlock>) {
                return std::numbers::sqrt2;
            } else if constexpr (std::is_same_v<T, BoxBlock>) {
                double s = 0.0;
                for (std::size_t i = 0; i < blk.lower.size(); ++i) {
                    double d = blk.upper[i] - blk.lower[i];
                    s += d * d;
                }
                return std::sqrt(s);
            } else if constexpr (std::is_same_v<T, Ball2Block>) {
                return 2.0 * blk.radius;
            } else {
                return 0.0;
            }
        },
        b);
}

/// Product feasible set Z = X x Y with one block per variable group.
struct FeasibleSet {
    SetBlock x = FreeBlock{0};
    SetBlock y = FreeBlock{0};

    std::size_t dim_x() const { return block_dim(x); }
    std::size_t dim_y() const { return block_dim(y); }
    std::size_t dim() const { return dim_x() + dim_y(); }

    bool is_simplex_product() const {
        return std::holds_alternative<SimplexBlock>(x) && std::holds_alternative<SimplexBlock>(y);
    }
};

// ---------------------------------------------------------------------------
// iterates
// ---------------------------------------------------------------------------

/// The joint point z = (x, y).
struct SaddleIterate {
    Vec x, y;

    std::size_t dim() const { return x.size() + y.size(); }

    Vec joint() const {
        Vec z(x);
        z.insert(z.end(), y.begin(), y.end());
        return z;
    }

    static SaddleIterate from_joint(std::span<const double> z, std::size_t nx, std::size_t ny) {
        if (z.size() != nx + ny) throw std::invalid_argument("from_joint: dimension mismatch");
        return SaddleIterate{Vec(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(nx)),
                             Vec(z.begin() + static_cast<std::ptrdiff_t>(nx), z.end())};
    }
};

inline bool contains(const FeasibleSet& set, const SaddleIterate& z, double tol = 1e-9) {
    return z.x.size() == set.dim_x() && z.y.size() == set.dim_y() &&
           block_contains(set.x, z.x, tol) && block_contains(set.y, z.y, tol);
}

inline SaddleIterate center_point(const FeasibleSet& set) {
    return SaddleIterate{block_center(set.x), block_center(set.y)};
}

inline double euclid_sq(const SaddleIterate& a, const SaddleIterate& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        double d = a.x[i] - b.x[i];
        s += d * d;
    }
    for (std::size_t i = 0; i < a.y.size(); ++i) {
        double d = a.y[i] - b.y[i];
        s += d * d;
    }
    return s;
}

// ---------------------------------------------------------------------------
// geometry setup
// ---------------------------------------------------------------------------

enum class ProxKind { entropy_simplex, squared_euclidean };

/// Norm pair (p, q), prox-function kind, feasible set and diameter bound; the
/// bundle every solver and schedule works against.
struct GeometrySetup {
    double p = 2.0;
    NormExponent q = NormExponent::finite(2.0);
    ProxKind prox_kind = ProxKind::squared_euclidean;
    FeasibleSet set;
    double diameter_p = 0.0;

    static GeometrySetup make(double p, NormExponent q, ProxKind kind, FeasibleSet set,
                              double diameter_p) {
        if (!(p >= 1.0 && p <= 2.0))
            throw std::invalid_argument("geometry: p must lie in [1, 2]");
        if (q.is_infinite()) {
            if (std::abs(p - 1.0) > 1e-12)
                throw std::invalid_argument("geometry: infinite q pairs only with p = 1");
        } else if (std::abs(1.0 / p + 1.0 / q.value() - 1.0) > 1e-12) {
            throw std::invalid_argument("geometry: 1/p + 1/q must equal 1");
        }
        if (kind == ProxKind::entropy_simplex && !set.is_simplex_product())
            throw std::invalid_argument("geometry: entropy prox requires simplex blocks");
        if (!(diameter_p >= 0.0)) throw std::invalid_argument("geometry: diameter must be >= 0");
        return GeometrySetup{p, q, kind, std::move(set), diameter_p};
    }
};

/// Entropy-on-simplex setup for Delta_nx x Delta_ny; the diameter follows the
/// usual sqrt(ln nx + ln ny) entropy bound from the uniform center.
inline GeometrySetup entropy_simplex_setup(std::size_t nx, std::size_t ny) {
    FeasibleSet set{SimplexBlock{nx}, SimplexBlock{ny}};
    double d = std::sqrt(std::log(static_cast<double>(nx)) + std::log(static_cast<double>(ny)));
    return GeometrySetup::make(1.0, NormExponent::infinity(), ProxKind::entropy_simplex,
                               std::move(set), d);
}

/// Euclidean setup over an arbitrary block set; diameter defaults to the
/// bound sqrt(max V) = sqrt(diam^2 / 2) implied by the set geometry.
inline GeometrySetup euclidean_setup(FeasibleSet set) {
    double dx = block_diameter2(set.x);
    double dy = block_diameter2(set.y);
    double d = std::sqrt(0.5 * (dx * dx + dy * dy));
    return GeometrySetup::make(2.0, NormExponent::finite(2.0), ProxKind::squared_euclidean,
                               std::move(set), d);
}

// ---------------------------------------------------------------------------
// Bregman divergence and prox-operator
// ---------------------------------------------------------------------------

namespace detail {

constexpr double kEntropyClamp = 1e-15;

// Clamp tiny/zero components to kEntropyClamp and renormalize; negative
// components are outside the divergence domain.
inline Vec clamp_simplex_point(std::span<const double> v) {
    Vec out(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0.0 && v[i] < -kEntropyClamp)
            throw std::domain_error("entropy divergence: negative component");
        out[i] = std::max(v[i], kEntropyClamp);
        sum += out[i];
    }
    for (double& x : out) x /= sum;
    return out;
}

inline double kl_block(std::span<const double> z, std::span<const double> w) {
    Vec zc = clamp_simplex_point(z);
    Vec wc = clamp_simplex_point(w);
    double s = 0.0;
    for (std::size_t i = 0; i < zc.size(); ++i) s += zc[i] * std::log(zc[i] / wc[i]);
    return std::max(s, 0.0);  // guard rounding on the diagonal
}

// Multiplicative-weights step u_i = z_i exp(-g_i) / sum, computed in
// log-space with max subtraction so large gamma*g cannot overflow.
inline void entropy_prox_block(std::span<double> z, std::span<const double> g) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = std::log(std::max(z[i], kEntropyClamp)) - g[i];
        m = std::max(m, z[i]);
    }
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - m);
        sum += v;
    }
    for (double& v : z) v /= sum;
}

}  // namespace detail

/// Bregman divergence V_z(w): KL(z || w) summed over blocks for the entropy
/// case, (1/2)||z - w||_2^2 for the Euclidean case.
inline double bregman(const GeometrySetup& setup, const SaddleIterate& z, const SaddleIterate& w) {
    if (z.x.size() != w.x.size() || z.y.size() != w.y.size())
        throw std::invalid_argument("bregman: dimension mismatch");
    if (setup.prox_kind == ProxKind::entropy_simplex)
        return detail::kl_block(z.x, w.x) + detail::kl_block(z.y, w.y);
    return 0.5 * euclid_sq(z, w);
}

/// Prox-operator prox_z(g) = argmin_u { V_u-from-z + <g, u> } over the
/// feasible set.  Entropy case: per-block multiplicative update followed by
/// simplex normalization; Euclidean case: projection of z - g.
inline SaddleIterate prox(const GeometrySetup& setup, const SaddleIterate& z,
                          std::span<const double> g) {
    std::size_t nx = z.x.size(), ny = z.y.size();
    if (g.size() != nx + ny) throw std::invalid_argument("prox: step dimension mismatch");
    if (!all_finite(g)) throw std::invalid_argument("prox: non-finite step components");

    SaddleIterate u = z;
    auto gx = g.subspan(0, nx);
    auto gy = g.subspan(nx, ny);
    if (setup.prox_kind == ProxKind::entropy_simplex) {
        detail::entropy_prox_block(u.x, gx);
        detail::entropy_prox_block(u.y, gy);
    } else {
        for (std::size_t i = 0; i < nx; ++i) u.x[i] -= gx[i];
        for (std::size_t i = 0; i < ny; ++i) u.y[i] -= gy[i];
        project_block(setup.set.x, u.x);
        project_block(setup.set.y, u.y);
    }
    assert(contains(setup.set, u, 1e-9));
    return u;
}

/// Uniform sample from the unit Euclidean sphere (normalized Gaussians).
inline Vec sample_sphere(std::size_t dim, RandomStream& rng) {
    if (dim == 0) throw std::invalid_argument("sample_sphere: dim must be >= 1");
    Vec e(dim);
    double n = 0.0;
    do {
        for (double& v : e) v = rng.normal();
        n = norm2(e);
    } while (n < 1e-12);
    for (double& v : e) v /= n;
    return e;
}

}  // namespace zosaddle
