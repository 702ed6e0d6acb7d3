#ifndef OODLAB_DOMAIN_HPP
#define OODLAB_DOMAIN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oodlab/common.hpp"

namespace oodlab {

using Point = std::vector<double>;

inline double euclidean(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double l1_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

/// A finite feature space: an ordered list of distinct points in R^d.
/// The minimum pairwise Euclidean distance d0 is computed eagerly; the
/// nearest-neighbor learner thresholds at 0.5 * d0.
class FeatureSpace {
public:
    explicit FeatureSpace(std::vector<Point> points) : points_(std::move(points)) {
        if (points_.empty()) throw DomainParameterError("feature space must be non-empty");
        dim_ = static_cast<int>(points_[0].size());
        if (dim_ < 1) throw DomainParameterError("feature dimension must be >= 1");
        for (const auto& p : points_)
            if (static_cast<int>(p.size()) != dim_)
                throw DomainParameterError("all points must share one dimension");
        d0_ = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (std::size_t j = i + 1; j < points_.size(); ++j) {
                const double d = euclidean(points_[i], points_[j]);
                if (d == 0.0) throw DomainParameterError("points must be distinct");
                d0_ = std::min(d0_, d);
            }
    }

    int size() const { return static_cast<int>(points_.size()); }
    int dim() const { return dim_; }
    const Point& point(int i) const { return points_[static_cast<std::size_t>(i)]; }
    const std::vector<Point>& points() const { return points_; }

    /// Min pairwise distance; +inf for a single point.
    double d0() const { return d0_; }

private:
    std::vector<Point> points_;
    int dim_ = 0;
    double d0_ = 0.0;
};

/// Joint distribution of ID feature and ID label over a finite space.
/// Mass is indexed by (point index, label in 1..K).
class IdJoint {
public:
    IdJoint(int num_points, int k, std::vector<double> mass)
        : num_points_(num_points), k_(k), mass_(std::move(mass)) {
        if (num_points_ < 1 || k_ < 1) throw DomainParameterError("IdJoint needs |X| >= 1, K >= 1");
        if (mass_.size() != static_cast<std::size_t>(num_points_) * k_)
            throw DomainParameterError("IdJoint mass table has wrong size");
        double total = 0.0;
        for (double m : mass_) {
            if (!(m >= 0.0)) throw DomainParameterError("ID masses must be nonnegative");
            total += m;
        }
        if (!nearly_equal(total, 1.0)) throw DomainParameterError("ID mass must total 1");
    }

    int num_points() const { return num_points_; }
    int k() const { return k_; }

    /// Mass at (point x, label y), y in 1..K.
    double mass(int x, int y) const {
        return mass_[static_cast<std::size_t>(x) * k_ + (y - 1)];
    }

    /// ID feature marginal at point x.
    double marginal(int x) const {
        double s = 0.0;
        for (int y = 1; y <= k_; ++y) s += mass(x, y);
        return s;
    }

    std::vector<int> support() const {
        std::vector<int> s;
        for (int x = 0; x < num_points_; ++x)
            if (marginal(x) > 0.0) s.push_back(x);
        return s;
    }

    bool equal_within(const IdJoint& other, double tol = kMassTol) const {
        if (other.num_points_ != num_points_ || other.k_ != k_) return false;
        for (std::size_t i = 0; i < mass_.size(); ++i)
            if (!nearly_equal(mass_[i], other.mass_[i], tol)) return false;
        return true;
    }

    const std::vector<double>& raw() const { return mass_; }

private:
    int num_points_;
    int k_;
    std::vector<double> mass_;
};

/// OOD feature marginal; the label is implicitly K+1.
class OodMarginal {
public:
    explicit OodMarginal(std::vector<double> mass) : mass_(std::move(mass)) {
        if (mass_.empty()) throw DomainParameterError("OodMarginal needs |X| >= 1");
        double total = 0.0;
        for (double m : mass_) {
            if (!(m >= 0.0)) throw DomainParameterError("OOD masses must be nonnegative");
            total += m;
        }
        if (!nearly_equal(total, 1.0)) throw DomainParameterError("OOD mass must total 1");
    }

    int num_points() const { return static_cast<int>(mass_.size()); }
    double mass(int x) const { return mass_[static_cast<std::size_t>(x)]; }

    std::vector<int> support() const {
        std::vector<int> s;
        for (int x = 0; x < num_points(); ++x)
            if (mass_[static_cast<std::size_t>(x)] > 0.0) s.push_back(x);
        return s;
    }

    bool equal_within(const OodMarginal& other, double tol = kMassTol) const {
        if (other.num_points() != num_points()) return false;
        for (std::size_t i = 0; i < mass_.size(); ++i)
            if (!nearly_equal(mass_[i], other.mass_[i], tol)) return false;
        return true;
    }

    const std::vector<double>& raw() const { return mass_; }

private:
    std::vector<double> mass_;
};

/// A domain: mixture (1 - pi_out) * id_part + pi_out * ood_part.
class FiniteDomain {
public:
    FiniteDomain(IdJoint id_part, OodMarginal ood_part, double pi_out)
        : id_(std::move(id_part)), ood_(std::move(ood_part)), pi_out_(pi_out) {
        if (id_.num_points() != ood_.num_points())
            throw DomainParameterError("ID and OOD parts must share the feature space");
        if (!(pi_out_ >= 0.0 && pi_out_ < 1.0))
            throw DomainParameterError("pi_out must lie in [0, 1)");
    }

    const IdJoint& id_part() const { return id_; }
    const OodMarginal& ood_part() const { return ood_; }
    double pi_out() const { return pi_out_; }
    int num_points() const { return id_.num_points(); }
    int k() const { return id_.k(); }

    /// Marginal of the pi_out-mixture at point x.
    double mixture_marginal(int x) const {
        return (1.0 - pi_out_) * id_.marginal(x) + pi_out_ * ood_.mass(x);
    }

    /// Marginal of the alpha-mixture at point x.
    double mixture_marginal(int x, double alpha) const {
        return (1.0 - alpha) * id_.marginal(x) + alpha * ood_.mass(x);
    }

private:
    IdJoint id_;
    OodMarginal ood_;
    double pi_out_;
};

/// Remix the same ID/OOD parts at class prior alpha.
inline FiniteDomain mix_alpha(const FiniteDomain& domain, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw DomainParameterError("mix_alpha: alpha must lie in [0, 1)");
    return FiniteDomain(domain.id_part(), domain.ood_part(), alpha);
}

/// Points where both the ID marginal and the OOD marginal are positive
/// (counting measure as the dominating measure).
inline std::vector<int> overlap_set(const FiniteDomain& domain) {
    std::vector<int> out;
    for (int x = 0; x < domain.num_points(); ++x)
        if (domain.id_part().marginal(x) > 0.0 && domain.ood_part().mass(x) > 0.0)
            out.push_back(x);
    return out;
}

inline bool is_separate(const FiniteDomain& domain) { return overlap_set(domain).empty(); }

/// True iff the balanced mixture 0.5*D_I + 0.5*D_O has density within
/// [1/b, b] of the base weights at every point of the base's support.
/// Mixture mass on a base-null point means the density does not exist,
/// which reads as non-membership.
inline bool check_density_bounds(const FiniteDomain& domain, const std::vector<double>& base,
                                 double b) {
    if (b < 1.0) throw DomainParameterError("density bound b must be >= 1");
    if (static_cast<int>(base.size()) != domain.num_points())
        throw DomainParameterError("base measure has wrong size");
    for (double w : base)
        if (!(w >= 0.0)) throw DomainParameterError("base weights must be nonnegative");
    for (int x = 0; x < domain.num_points(); ++x) {
        const double mix = 0.5 * domain.id_part().marginal(x) + 0.5 * domain.ood_part().mass(x);
        if (base[static_cast<std::size_t>(x)] == 0.0) {
            if (mix > 0.0) return false;
            continue;
        }
        const double f = mix / base[static_cast<std::size_t>(x)];
        if (f < 1.0 / b - kMassTol || f > b + kMassTol) return false;
    }
    return true;
}

/// n i.i.d. draws from the ID joint; deterministic given the seed.
inline std::vector<std::pair<int, int>> sample_id(const FiniteDomain& domain, int n,
                                                  std::uint64_t seed) {
    if (n < 1) throw DomainParameterError("sample_id: n must be >= 1");
    // CDF over (x, y) in canonical order.
    std::vector<double> cdf;
    std::vector<std::pair<int, int>> atoms;
    double acc = 0.0;
    for (int x = 0; x < domain.num_points(); ++x)
        for (int y = 1; y <= domain.k(); ++y) {
            const double m = domain.id_part().mass(x, y);
            if (m > 0.0) {
                acc += m;
                cdf.push_back(acc);
                atoms.emplace_back(x, y);
            }
        }
    Rng rng(seed);
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01() * acc;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx = std::min(static_cast<std::size_t>(it - cdf.begin()), atoms.size() - 1);
        out.push_back(atoms[idx]);
    }
    return out;
}

/// Canonical encoding of the ID joint: sorted (point, label, mass rounded to
/// 12 decimals) triples. Equal keys iff the ID parts agree within 1e-12.
inline std::string id_equivalence_key(const FiniteDomain& domain) {
    std::ostringstream os;
    os << "K=" << domain.k();
    for (int x = 0; x < domain.num_points(); ++x)
        for (int y = 1; y <= domain.k(); ++y) {
            const long long r = std::llround(domain.id_part().mass(x, y) * 1e12);
            if (r != 0) os << "|" << x << ":" << y << ":" << r;
        }
    return os.str();
}

enum class DomainSpaceKind { Single, Total, Separate, FiniteID, DensityBased };

inline std::string to_string(DomainSpaceKind k) {
    switch (k) {
        case DomainSpaceKind::Single: return "single";
        case DomainSpaceKind::Total: return "total";
        case DomainSpaceKind::Separate: return "separate";
        case DomainSpaceKind::FiniteID: return "finite-id";
        case DomainSpaceKind::DensityBased: return "density-based";
    }
    return "?";
}

/// A domain space: a kind plus an explicit member list for enumerable checks.
/// All five kinds are prior-unknown (closed under mix_alpha).
struct DomainSpaceSpec {
    DomainSpaceKind kind = DomainSpaceKind::Total;
    std::vector<FiniteDomain> members;
    std::vector<IdJoint> id_list;      // FiniteID only
    std::vector<double> base_weights;  // DensityBased only
    double density_bound = 1.0;        // b >= 1

    void validate() const {
        if (kind == DomainSpaceKind::DensityBased) {
            if (density_bound < 1.0) throw DomainParameterError("density bound b must be >= 1");
            if (base_weights.empty()) throw DomainParameterError("density-based space needs base weights");
            for (double w : base_weights)
                if (!(w >= 0.0)) throw DomainParameterError("base weights must be nonnegative");
        }
        if (kind == DomainSpaceKind::FiniteID) {
            if (id_list.empty()) throw DomainParameterError("finite-ID space needs an ID list");
            for (std::size_t i = 0; i < id_list.size(); ++i)
                for (std::size_t j = i + 1; j < id_list.size(); ++j)
                    if (id_list[i].equal_within(id_list[j]))
                        throw DomainParameterError("finite-ID list must be duplicate-free");
        }
        if (kind == DomainSpaceKind::Single && members.empty())
            throw DomainParameterError("single-distribution space needs its domain");
    }

    /// Membership predicate; alpha-independent by construction for every kind.
    bool contains(const FiniteDomain& d) const {
        switch (kind) {
            case DomainSpaceKind::Total: return true;
            case DomainSpaceKind::Separate: return is_separate(d);
            case DomainSpaceKind::Single:
                return !members.empty() && d.id_part().equal_within(members[0].id_part()) &&
                       d.ood_part().equal_within(members[0].ood_part());
            case DomainSpaceKind::FiniteID:
                for (const auto& id : id_list)
                    if (d.id_part().equal_within(id)) return true;
                return false;
            case DomainSpaceKind::DensityBased:
                return check_density_bounds(d, base_weights, density_bound);
        }
        return false;
    }
};

}  // namespace oodlab

#endif
