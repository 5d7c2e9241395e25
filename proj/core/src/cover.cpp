#include "starmetric/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "starmetric/construct.hpp"
#include "starmetric/errors.hpp"

namespace starmetric {

namespace {

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Smallest positive integer n with 1/n strictly below s.
long long first_n_below(double s) {
    if (!(s > 0.0)) throw DomainError("radius must be positive");
    long long n = static_cast<long long>(std::floor(1.0 / s)) + 1;
    if (n < 1) n = 1;
    while (1.0 / static_cast<double>(n) >= s) ++n;
    return n;
}

}  // namespace

Cover::Cover(StarSpace space, std::vector<CoverMember> members)
    : space_(std::move(space)), members_(std::move(members)) {
    const std::size_t n = space_.size();
    mask_.assign(members_.size() * n, 0);
    std::vector<char> covered(n, 0);
    for (std::size_t m = 0; m < members_.size(); ++m) {
        members_[m].pts = sorted_unique(std::move(members_[m].pts));
        for (std::size_t p : members_[m].pts) {
            if (p >= n) throw std::out_of_range("cover member holds an out-of-range index");
            mask_[m * n + p] = 1;
            covered[p] = 1;
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (!covered[p]) {
            throw ConfigError("cover does not contain point " + space_.id(p));
        }
    }
}

Cover::Cover(StarSpace space, std::vector<std::vector<std::size_t>> sets)
    : Cover(std::move(space), [&] {
          std::vector<CoverMember> ms(sets.size());
          for (std::size_t i = 0; i < sets.size(); ++i) ms[i].pts = std::move(sets[i]);
          return ms;
      }()) {}

bool Cover::member_contains(std::size_t m, std::size_t point) const {
    return mask_[m * space_.size() + point] != 0;
}

std::vector<std::size_t> star(const Cover& cover, std::size_t x) {
    if (x >= cover.space().size()) throw std::out_of_range("star target out of range");
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < cover.members().size(); ++m) {
        if (cover.member_contains(m, x)) {
            const auto& pts = cover.members()[m].pts;
            out.insert(out.end(), pts.begin(), pts.end());
        }
    }
    return sorted_unique(std::move(out));
}

std::vector<std::size_t> star(const Cover& cover, std::span<const std::size_t> target) {
    std::vector<std::size_t> out;
    for (std::size_t x : target) {
        auto s = star(cover, x);
        out.insert(out.end(), s.begin(), s.end());
    }
    return sorted_unique(std::move(out));
}

namespace {

bool subset_of_some(const std::vector<std::size_t>& pts, const Cover& coarse) {
    for (std::size_t m = 0; m < coarse.members().size(); ++m) {
        bool inside = true;
        for (std::size_t p : pts) {
            if (!coarse.member_contains(m, p)) {
                inside = false;
                break;
            }
        }
        if (inside) return true;
    }
    return false;
}

void require_same_space(const Cover& a, const Cover& b) {
    if (!a.space().same_space(b.space())) {
        throw ConfigError("covers live on different spaces");
    }
}

}  // namespace

RefineResult refines(const Cover& fine, const Cover& coarse) {
    require_same_space(fine, coarse);
    for (std::size_t m = 0; m < fine.members().size(); ++m) {
        if (!subset_of_some(fine.members()[m].pts, coarse)) {
            return {false, m};
        }
    }
    return {true, std::nullopt};
}

RefineResult star_refines(const Cover& fine, const Cover& coarse) {
    require_same_space(fine, coarse);
    for (std::size_t m = 0; m < fine.members().size(); ++m) {
        // st(V, fine) = union of fine members meeting V.
        std::vector<std::size_t> st;
        for (std::size_t w = 0; w < fine.members().size(); ++w) {
            bool meets = false;
            for (std::size_t p : fine.members()[m].pts) {
                if (fine.member_contains(w, p)) {
                    meets = true;
                    break;
                }
            }
            if (meets) {
                const auto& pts = fine.members()[w].pts;
                st.insert(st.end(), pts.begin(), pts.end());
            }
        }
        st = sorted_unique(std::move(st));
        if (!subset_of_some(st, coarse)) {
            return {false, m};
        }
    }
    return {true, std::nullopt};
}

Cover ball_cover(const StarSpace& space, long long n) {
    if (n < 1) throw ConfigError("ball_cover needs n >= 1");
    const double r = 1.0 / static_cast<double>(n);
    std::vector<CoverMember> members(space.size());
    for (std::size_t c = 0; c < space.size(); ++c) {
        members[c].pts = ball(space, c, r);
        members[c].center = c;
        members[c].radius = r;
    }
    return Cover(space, std::move(members));
}

UniformityCertificate verify_uniformity_base(const StarSpace& space, int n0, double margin,
                                             bool minimize) {
    if (n0 < 1) throw ConfigError("verify_uniformity_base needs n0 >= 1");
    UniformityCertificate cert;
    cert.n0 = n0;

    const TDefiner& def = space.definer();
    cert.r1 = kfold_radius(def, 3, 1.0 / n0, margin);
    cert.n1 = first_n_below(cert.r1);

    const Cover coarse = ball_cover(space, n0);
    const Cover fine = ball_cover(space, cert.n1);

    const RefineResult u2 = refines(fine, coarse);
    cert.u2_pass = u2.pass;
    cert.u2_witness_member = u2.witness_member;

    const RefineResult u3 = star_refines(fine, coarse);
    cert.u3_pass = u3.pass;
    cert.u3_witness_member = u3.witness_member;

    // U4: for each distinct-payload pair pick n with (1/n) (*) (1/n) < d(x,y)
    // and verify x outside st(y, B_{1/n}) without materializing the cover.
    cert.u4_pass = true;
    const std::size_t count = space.size();
    for (std::size_t x = 0; x < count; ++x) {
        for (std::size_t y = x + 1; y < count; ++y) {
            if (space.point(x).same_payload(space.point(y))) continue;
            const double r = space.dist(x, y);
            if (r <= 0.0) {
                cert.u4_pass = false;
                cert.u4_failures.push_back({x, y, 0, false});
                continue;
            }
            const double s = joint_zero_radius(def, r, margin);
            const long long n = first_n_below(s);
            cert.u4_max_n = std::max(cert.u4_max_n, n);
            const double rad = 1.0 / static_cast<double>(n);
            bool separated = true;
            for (std::size_t z = 0; z < count; ++z) {
                if (space.dist(z, y) < rad && space.dist(z, x) < rad) {
                    separated = false;
                    break;
                }
            }
            if (!separated) {
                cert.u4_pass = false;
                cert.u4_failures.push_back({x, y, n, false});
            }
        }
    }

    if (minimize) {
        for (long long cand = 1; cand <= cert.n1; ++cand) {
            if (star_refines(ball_cover(space, cand), coarse).pass) {
                cert.minimal_n1 = cand;
                break;
            }
        }
    }
    return cert;
}

EpsilonNet greedy_net(const StarSpace& space, double epsilon, NetStrategy strategy) {
    if (!(epsilon > 0.0)) throw DomainError("greedy_net needs epsilon > 0");
    const std::size_t n = space.size();
    EpsilonNet net;
    net.epsilon = epsilon;
    net.construction = strategy;

    std::vector<char> covered(n, 0);
    std::size_t remaining = n;

    if (strategy == NetStrategy::Packing) {
        for (std::size_t i = 0; i < n && remaining > 0; ++i) {
            if (covered[i]) continue;
            net.centers.push_back(i);
            for (std::size_t j = 0; j < n; ++j) {
                if (!covered[j] && space.dist(i, j) < epsilon) {
                    covered[j] = 1;
                    --remaining;
                }
            }
        }
        return net;
    }

    while (remaining > 0) {
        std::size_t best = 0, best_gain = 0;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t gain = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (!covered[j] && space.dist(c, j) < epsilon) ++gain;
            }
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        net.centers.push_back(best);
        for (std::size_t j = 0; j < n; ++j) {
            if (!covered[j] && space.dist(best, j) < epsilon) {
                covered[j] = 1;
                --remaining;
            }
        }
    }
    return net;
}

DenseResult verify_dense(const StarSpace& space, std::span<const std::size_t> centers,
                         double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("verify_dense needs epsilon > 0");
    for (std::size_t p = 0; p < space.size(); ++p) {
        bool hit = false;
        for (std::size_t c : centers) {
            if (space.dist(c, p) < epsilon) {
                hit = true;
                break;
            }
        }
        if (!hit) return {false, p};
    }
    return {true, std::nullopt};
}

DenseResult verify_dense_in(const StarSpace& space, std::span<const std::size_t> centers,
                            std::span<const std::size_t> subset, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("verify_dense_in needs epsilon > 0");
    for (std::size_t p : subset) {
        bool hit = false;
        for (std::size_t c : centers) {
            if (space.dist(c, p) < epsilon) {
                hit = true;
                break;
            }
        }
        if (!hit) return {false, p};
    }
    return {true, std::nullopt};
}

std::vector<std::size_t> subspace_net(const StarSpace& space,
                                      std::span<const std::size_t> subset, double epsilon,
                                      double margin) {
    const double eps1 = joint_zero_radius(space.definer(), epsilon, margin);
    const EpsilonNet ambient = greedy_net(space, eps1, NetStrategy::Packing);
    std::vector<std::size_t> centers;
    for (std::size_t c : ambient.centers) {
        for (std::size_t m : subset) {
            if (space.dist(c, m) < eps1) {
                centers.push_back(m);  // first subset point inside the small ball
                break;
            }
        }
    }
    return sorted_unique(std::move(centers));
}

std::size_t covering_number(const StarSpace& space, double epsilon) {
    return greedy_net(space, epsilon, NetStrategy::Packing).centers.size();
}

double diameter(const StarSpace& space, std::span<const std::size_t> subset) {
    double best = 0.0;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        for (std::size_t j = i + 1; j < subset.size(); ++j) {
            best = std::max(best, space.dist(subset[i], subset[j]));
        }
    }
    return best;
}

double diameter(const StarSpace& space) {
    std::vector<std::size_t> all(space.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return diameter(space, all);
}

double set_distance(const StarSpace& space, std::size_t x, std::span<const std::size_t> a) {
    if (a.empty()) return 1.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p : a) best = std::min(best, space.dist(x, p));
    return best;
}

std::vector<std::size_t> closure_members(const StarSpace& space,
                                         std::span<const std::size_t> a) {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < space.size(); ++x) {
        if (set_distance(space, x, a) == 0.0) out.push_back(x);
    }
    return out;
}

ChainMetricTable chain_metric(const StarSpace& space, double axiom_tol) {
    const AxiomReport axioms = check_axioms(space, axiom_tol);
    if (!axioms.all_pass()) {
        throw PreconditionError("chain_metric needs a space passing the ★-metric axioms");
    }

    ChainMetricTable table;
    table.n = space.size();
    table.rho = space.distance_matrix();
    const std::size_t n = table.n;

    // Floyd-Warshall iterated to a fixed point so the triangle inequality
    // holds for the stored values as evaluated, not just in exact arithmetic.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                const double dik = table.rho[i * n + k];
                for (std::size_t j = 0; j < n; ++j) {
                    const double via = dik + table.rho[k * n + j];
                    if (via < table.rho[i * n + j]) {
                        table.rho[i * n + j] = via;
                        changed = true;
                    }
                }
            }
        }
    }

    const double diam = diameter(space);
    if (diam > 0.0) {
        double max_rho = 0.0;
        for (double v : table.rho) max_rho = std::max(max_rho, v);
        for (int j = 0; j <= 6; ++j) {
            const double eps = diam / std::pow(2.0, j);
            for (std::size_t c = 0; c < n; ++c) {
                double fwd = max_rho + 1.0;  // ball_rho(c, fwd) inside ball_d(c, eps)
                double bwd = diam + 1.0;     // ball_d(c, bwd) inside ball_rho(c, eps)
                for (std::size_t x = 0; x < n; ++x) {
                    if (space.dist(c, x) >= eps) fwd = std::min(fwd, table.rho[c * n + x]);
                    if (table.rho[c * n + x] >= eps) bwd = std::min(bwd, space.dist(c, x));
                }
                table.equivalence.push_back({eps, c, fwd, bwd});
            }
        }
    }
    return table;
}

EpsilonNet product_net(const StarSpace& product_space, double epsilon, double margin) {
    const ProductInfo* info = product_space.product_info();
    if (info == nullptr) throw ConfigError("product_net needs a product space");
    if (!(epsilon > 0.0)) throw DomainError("product_net needs epsilon > 0");

    const std::size_t k = info->factors.size();
    const double factor_eps =
        info->mode == ProductMode::Fold && k >= 2
            ? kfold_radius(product_space.definer(), static_cast<int>(k), epsilon, margin)
            : epsilon;

    std::vector<std::vector<std::size_t>> factor_centers(k);
    for (std::size_t f = 0; f < k; ++f) {
        factor_centers[f] = greedy_net(info->factors[f], factor_eps, NetStrategy::Packing).centers;
    }

    EpsilonNet net;
    net.epsilon = epsilon;
    net.construction = NetStrategy::Packing;
    std::vector<std::size_t> cursor(k, 0);
    while (true) {
        std::vector<std::size_t> tuple(k);
        for (std::size_t f = 0; f < k; ++f) tuple[f] = factor_centers[f][cursor[f]];
        net.centers.push_back(info->flat_index(tuple));
        std::size_t f = k;
        while (f-- > 0) {
            if (++cursor[f] < factor_centers[f].size()) break;
            cursor[f] = 0;
            if (f == 0) {
                std::sort(net.centers.begin(), net.centers.end());
                return net;
            }
        }
    }
}

EpsilonNet union_net(const StarSpace& union_space, double epsilon) {
    const UnionInfo* info = union_space.union_info();
    if (info == nullptr) throw ConfigError("union_net needs a disjoint-union space");
    EpsilonNet net;
    net.epsilon = epsilon;
    net.construction = NetStrategy::Packing;
    for (std::size_t p = 0; p < info->parts.size(); ++p) {
        const auto part_net = greedy_net(info->parts[p], epsilon, NetStrategy::Packing);
        for (std::size_t c : part_net.centers) net.centers.push_back(info->offsets[p] + c);
    }
    return net;
}

}  // namespace starmetric
