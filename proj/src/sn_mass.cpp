#include "trigstat/sn_mass.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace trigstat {

Perm::Perm(int n) : n_(n) {
    if (n < 1 || n > kMaxN) throw std::invalid_argument("Perm: n out of range");
    for (int i = 0; i < n; ++i) img_[i] = static_cast<std::uint8_t>(i);
    for (int i = n; i < kMaxN; ++i) img_[i] = static_cast<std::uint8_t>(i);
}

Perm Perm::from_images(const std::vector<int>& images) {
    Perm p(static_cast<int>(images.size()));
    std::array<bool, kMaxN> seen{};
    for (std::size_t i = 0; i < images.size(); ++i) {
        int v = images[i];
        if (v < 0 || v >= p.n_ || seen[v]) throw std::invalid_argument("Perm: not a bijection");
        seen[v] = true;
        p.img_[i] = static_cast<std::uint8_t>(v);
    }
    return p;
}

bool Perm::is_identity() const {
    for (int i = 0; i < n_; ++i)
        if (img_[i] != i) return false;
    return true;
}

Perm Perm::compose(const Perm& o) const {
    if (n_ != o.n_) throw std::invalid_argument("Perm: mixed degrees");
    Perm r(n_);
    for (int i = 0; i < n_; ++i) r.img_[i] = img_[o.img_[i]];
    return r;
}

Perm Perm::inverse() const {
    Perm r(n_);
    for (int i = 0; i < n_; ++i) r.img_[img_[i]] = static_cast<std::uint8_t>(i);
    return r;
}

Perm Perm::power(u64 e) const {
    Perm base = *this, acc(n_);
    while (e) {
        if (e & 1) acc = acc.compose(base);
        base = base.compose(base);
        e >>= 1;
    }
    return acc;
}

Perm Perm::conjugate_by(const Perm& g) const {
    return g.compose(this->compose(g.inverse()));
}

std::vector<std::vector<int>> Perm::cycles() const {
    std::vector<std::vector<int>> out;
    std::array<bool, kMaxN> seen{};
    for (int i = 0; i < n_; ++i) {
        if (seen[i]) continue;
        std::vector<int> c;
        int j = i;
        do {
            seen[j] = true;
            c.push_back(j);
            j = img_[j];
        } while (j != i);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<int> Perm::cycle_type() const {
    std::vector<int> t;
    for (auto& c : cycles()) t.push_back(static_cast<int>(c.size()));
    std::sort(t.rbegin(), t.rend());
    return t;
}

int Perm::num_cycles() const { return static_cast<int>(cycles().size()); }

u64 Perm::order() const {
    u64 o = 1;
    for (int len : cycle_type()) o = std::lcm<u64>(o, static_cast<u64>(len));
    return o;
}

std::string Perm::to_string() const {
    std::ostringstream os;
    bool any = false;
    for (auto& c : cycles()) {
        if (c.size() == 1) continue;
        any = true;
        os << "(";
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) os << " ";
            os << c[i] + 1;
        }
        os << ")";
    }
    return any ? os.str() : "()";
}

std::vector<Perm> symmetric_group(int n) {
    std::vector<int> base(n);
    std::iota(base.begin(), base.end(), 0);
    std::vector<Perm> out;
    do {
        out.push_back(Perm::from_images(base));
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

u64 centralizer_size(const std::vector<int>& cycle_type) {
    std::map<int, int> mult;
    for (int b : cycle_type) {
        if (b < 1) throw std::invalid_argument("centralizer_size: bad cycle type");
        mult[b]++;
    }
    u64 s = 1;
    for (auto& [b, a] : mult) {
        for (int i = 2; i <= a; ++i) s *= static_cast<u64>(i);
        for (int i = 0; i < a; ++i) s *= static_cast<u64>(b);
    }
    return s;
}

std::vector<Perm> centralizer_elements(const Perm& y) {
    // elements commuting with y permute same-length cycles and rotate
    // within cycles
    int n = y.n();
    auto cyc = y.cycles();
    std::map<int, std::vector<int>> by_len; // length -> cycle indices
    for (std::size_t i = 0; i < cyc.size(); ++i) by_len[static_cast<int>(cyc[i].size())].push_back(static_cast<int>(i));

    std::vector<Perm> out;
    // odometer state: per length class a permutation of its cycles and a
    // rotation per cycle
    struct ClassState {
        int len;
        std::vector<int> idx;  // cycle indices of this length
        std::vector<int> perm; // current permutation of idx positions
        std::vector<int> rot;  // rotation per position
    };
    std::vector<ClassState> classes;
    for (auto& [len, idx] : by_len) {
        ClassState c;
        c.len = len;
        c.idx = idx;
        c.perm.resize(idx.size());
        std::iota(c.perm.begin(), c.perm.end(), 0);
        c.rot.assign(idx.size(), 0);
        classes.push_back(std::move(c));
    }

    for (;;) {
        std::vector<int> images(n, -1);
        for (auto& c : classes) {
            for (std::size_t pos = 0; pos < c.idx.size(); ++pos) {
                const auto& src = cyc[c.idx[pos]];
                const auto& dst = cyc[c.idx[c.perm[pos]]];
                for (int k = 0; k < c.len; ++k)
                    images[src[k]] = dst[(k + c.rot[pos]) % c.len];
            }
        }
        out.push_back(Perm::from_images(images));

        // advance: rotations first, then cycle permutations
        bool carried = false;
        for (auto& c : classes) {
            for (auto& r : c.rot) {
                if (++r < c.len) { carried = true; break; }
                r = 0;
            }
            if (carried) break;
            if (std::next_permutation(c.perm.begin(), c.perm.end())) { carried = true; break; }
        }
        if (!carried) break;
    }
    return out;
}

void require_tame(int n, u64 q) {
    if (n < 1 || n > Perm::kMaxN)
        throw std::invalid_argument("n must be between 1 and 8");
    auto pp = prime_power_base(q);
    if (!pp) throw std::invalid_argument("q must be a prime power, got " + std::to_string(q));
    if (pp->first <= static_cast<u64>(n))
        throw std::invalid_argument("wild case refused: characteristic " + std::to_string(pp->first) +
                                    " must exceed n = " + std::to_string(n));
}

namespace {

// some x0 with x0 y x0^{-1} = y^q (exists since y^q has the same cycle type)
Perm base_conjugator(const Perm& y, const Perm& yq) {
    auto cy = y.cycles();
    auto cq = yq.cycles();
    auto by_len = [](const std::vector<std::vector<int>>& cs) {
        std::map<int, std::vector<const std::vector<int>*>> m;
        for (auto& c : cs) m[static_cast<int>(c.size())].push_back(&c);
        return m;
    };
    auto my = by_len(cy), mq = by_len(cq);
    std::vector<int> images(y.n(), -1);
    for (auto& [len, list] : my) {
        auto& qlist = mq.at(len);
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& src = *list[i];
            const auto& dst = *qlist[i];
            for (int k = 0; k < len; ++k) images[src[k]] = dst[k];
        }
    }
    Perm x0 = Perm::from_images(images);
    if (y.conjugate_by(x0) != yq) throw std::logic_error("base conjugator construction failed");
    return x0;
}

int count_fiber_points(const Perm& x, const Perm& y) {
    // <x,y>-orbits via union-find; count those equal to a single y-cycle
    int n = x.n();
    std::array<int, Perm::kMaxN> parent{};
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
    auto unite = [&](int i, int j) { parent[find(i)] = find(j); };
    for (int i = 0; i < n; ++i) {
        unite(i, x.apply(i));
        unite(i, y.apply(i));
    }
    std::map<int, std::vector<int>> orbits;
    for (int i = 0; i < n; ++i) orbits[find(i)].push_back(i);
    int fibers = 0;
    for (auto& [root, members] : orbits) {
        // the orbit is a y-orbit iff it equals the y-cycle of its least member
        std::vector<int> yc;
        int j = members[0];
        do {
            yc.push_back(j);
            j = y.apply(j);
        } while (j != members[0]);
        std::sort(yc.begin(), yc.end());
        if (yc == members) ++fibers;
    }
    return fibers;
}

Perm canonical_perm_of_type(int n, const std::vector<int>& parts) {
    std::vector<int> images(n);
    int start = 0;
    for (int len : parts) {
        for (int k = 0; k < len; ++k) images[start + k] = start + (k + 1) % len;
        start += len;
    }
    return Perm::from_images(images);
}

u64 factorial(int n) {
    u64 f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<u64>(i);
    return f;
}

} // namespace

std::vector<std::pair<Perm, Perm>> enumerate_pairs(int n, u64 q) {
    require_tame(n, q);
    std::vector<std::pair<Perm, Perm>> out;
    for (const Perm& y : symmetric_group(n)) {
        Perm yq = y.power(q % y.order());
        Perm x0 = base_conjugator(y, yq);
        for (const Perm& c : centralizer_elements(y)) out.emplace_back(x0.compose(c), y);
    }
    return out;
}

u64 count_conjugators(const Perm& y, u64 q) {
    Perm yq = y.power(q % y.order());
    u64 count = 0;
    for (const Perm& x : symmetric_group(y.n()))
        if (y.conjugate_by(x) == yq) ++count;
    return count;
}

u64 single_cycle_fix_count(const Perm& y, const std::vector<int>& cycle, u64 q) {
    // validate that `cycle` is the support of one cycle of y
    std::vector<int> sorted = cycle;
    std::sort(sorted.begin(), sorted.end());
    bool found = false;
    for (auto& c : y.cycles()) {
        std::vector<int> cs = c;
        std::sort(cs.begin(), cs.end());
        if (cs == sorted) { found = true; break; }
    }
    if (!found) throw std::invalid_argument("single_cycle_fix_count: not a cycle of y");

    Perm yq = y.power(q % y.order());
    u64 count = 0;
    for (const Perm& x : symmetric_group(y.n())) {
        if (y.conjugate_by(x) != yq) continue;
        // the support of a y-cycle is an <x,y>-orbit iff x preserves it
        bool preserved = true;
        for (int i : sorted)
            if (!std::binary_search(sorted.begin(), sorted.end(), x.apply(i))) { preserved = false; break; }
        if (preserved) ++count;
    }
    return count;
}

std::vector<std::vector<int>> partitions_of(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int maxpart) {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(rest, maxpart); p >= 1; --p) {
            cur.push_back(p);
            rec(rest - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

std::vector<PairClass> pair_classes(int n, u64 q) {
    require_tame(n, q);
    u64 nfact = factorial(n);
    std::vector<PairClass> out;

    for (const auto& parts : partitions_of(n)) {
        Perm y0 = canonical_perm_of_type(n, parts);
        int disc = n - static_cast<int>(parts.size());

        if (y0.is_identity()) {
            // (x, id) classes are conjugacy classes of x
            for (const auto& xparts : partitions_of(n)) {
                PairClass c{canonical_perm_of_type(n, xparts), y0, 0, disc, 0, Rat(0)};
                c.class_size = nfact / centralizer_size(xparts);
                c.fiber_points = count_fiber_points(c.x, y0);
                c.mass = rat_u(c.class_size, nfact);
                out.push_back(std::move(c));
            }
            continue;
        }

        Perm yq = y0.power(q % y0.order());
        Perm x0 = base_conjugator(y0, yq);
        auto cent = centralizer_elements(y0);
        std::vector<Perm> sols;
        sols.reserve(cent.size());
        for (const Perm& c : cent) sols.push_back(x0.compose(c));
        std::sort(sols.begin(), sols.end());

        // orbits of Cent(y0) acting on the solutions by conjugation
        std::vector<bool> used(sols.size(), false);
        for (std::size_t i = 0; i < sols.size(); ++i) {
            if (used[i]) continue;
            std::set<Perm> orbit;
            std::vector<Perm> frontier{sols[i]};
            orbit.insert(sols[i]);
            while (!frontier.empty()) {
                Perm cur = frontier.back();
                frontier.pop_back();
                for (const Perm& g : cent) {
                    Perm img = cur.conjugate_by(g);
                    if (orbit.insert(img).second) frontier.push_back(img);
                }
            }
            for (std::size_t j = i; j < sols.size(); ++j)
                if (orbit.count(sols[j])) used[j] = true;

            PairClass c{*orbit.begin(), y0, 0, disc, 0, Rat(0)};
            c.class_size = nfact / static_cast<u64>(cent.size()) * static_cast<u64>(orbit.size());
            c.fiber_points = count_fiber_points(c.x, y0);
            Rat qpow = rat_pow(rat_u(q), disc);
            c.mass = rat_u(c.class_size, nfact) / qpow;
            out.push_back(std::move(c));
        }
    }

    std::sort(out.begin(), out.end(), [](const PairClass& a, const PairClass& b) {
        if (a.disc_exponent != b.disc_exponent) return a.disc_exponent < b.disc_exponent;
        auto ta = a.y.cycle_type(), tb = b.y.cycle_type();
        if (ta != tb) return ta < tb;
        if (a.fiber_points != b.fiber_points) return a.fiber_points > b.fiber_points;
        return a.x < b.x;
    });
    return out;
}

ExactDist conjectural_fiber_law(int n, u64 q) {
    auto classes = pair_classes(n, q);
    Rat total(0);
    std::map<long, Rat> masses;
    for (auto& c : classes) {
        total += c.mass;
        masses[c.fiber_points] += c.mass;
    }
    for (auto& [k, v] : masses) v /= total;
    return ExactDist::from_masses(std::move(masses));
}

Rat expected_fiber_partition_formula(int n, u64 q) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    Rat num(0), den(0);
    Rat qr = rat_u(q);
    for (const auto& parts : partitions_of(n)) {
        int m = static_cast<int>(parts.size());
        int ell = n - m;
        std::set<int> distinct(parts.begin(), parts.end());
        Rat w = rat_pow(qr, -ell);
        den += w;
        num += Rat(static_cast<long>(distinct.size())) * w;
    }
    return num / den;
}

u64 PartitionStats::p(int m) const {
    auto it = by_parts.find(m);
    return it == by_parts.end() ? 0 : it->second;
}

u64 PartitionStats::p(int m, int k) const {
    auto it = by_parts_values.find({m, k});
    return it == by_parts_values.end() ? 0 : it->second;
}

PartitionStats partition_stats(int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    PartitionStats st;
    st.n = n;
    for (const auto& parts : partitions_of(n)) {
        int m = static_cast<int>(parts.size());
        std::set<int> distinct(parts.begin(), parts.end());
        st.by_parts[m]++;
        st.by_parts_values[{m, static_cast<int>(distinct.size())}]++;
    }
    return st;
}

ChartComparison chart_masses_n3(u64 q) {
    ChartComparison cmp;
    cmp.total_mass = Rat(0);
    Rat qr = rat_u(q);
    cmp.expected_total_mass = 1 + 1 / qr + 1 / (qr * qr);
    for (const auto& row : chart_c_constants(q)) cmp.rows.push_back({row, Rat(0), -1, 0, false, false, false});

    auto classes = pair_classes(3, q);
    std::ostringstream diag;
    bool ok = true;

    auto x_label = [](const PairClass& c) -> std::string {
        auto yt = c.y.cycle_type();
        if (yt == std::vector<int>{1, 1, 1}) {
            auto xt = c.x.cycle_type();
            if (xt == std::vector<int>{1, 1, 1}) return "()";
            if (xt == std::vector<int>{2, 1}) return "(12)";
            return "(123)"; // both 3-cycles form one class
        }
        if (yt == std::vector<int>{2, 1}) return c.x.is_identity() ? "()" : "(12)";
        // y is a 3-cycle
        if (c.x.is_identity()) return "()";
        if (c.x == c.y) return "(123)";
        if (c.x == c.y.compose(c.y)) return "(132)";
        return "(12)"; // transposition conjugating y to y^2
    };
    auto y_label = [](const PairClass& c) -> std::string {
        auto yt = c.y.cycle_type();
        if (yt == std::vector<int>{1, 1, 1}) return "()";
        if (yt == std::vector<int>{2, 1}) return "(12)";
        return "(123)";
    };

    for (auto& c : classes) {
        cmp.total_mass += c.mass;
        std::string xl = x_label(c), yl = y_label(c);
        bool placed = false;
        for (auto& r : cmp.rows) {
            if (r.matched || r.chart.frobenius != xl || r.chart.inertia != yl) continue;
            r.matched = true;
            r.computed_mass = c.mass;
            r.computed_fiber = c.fiber_points;
            r.class_size = c.class_size;
            r.mass_match = (c.mass == r.chart.c);
            r.fiber_match = (c.fiber_points == fiber_points(r.chart.type));
            if (!r.mass_match)
                diag << "mass mismatch at (" << xl << ", " << yl << "): computed " << rat_str(c.mass)
                     << ", chart " << rat_str(r.chart.c) << "\n";
            if (!r.fiber_match)
                diag << "fiber mismatch at (" << xl << ", " << yl << "): computed " << c.fiber_points
                     << ", chart " << fiber_points(r.chart.type) << "\n";
            ok = ok && r.mass_match && r.fiber_match;
            placed = true;
            break;
        }
        if (!placed) {
            diag << "class (" << c.x.to_string() << ", " << c.y.to_string() << ") with mass "
                 << rat_str(c.mass) << " has no chart row\n";
            ok = false;
        }
    }
    for (auto& r : cmp.rows)
        if (!r.matched) {
            diag << "chart row (" << r.chart.frobenius << ", " << r.chart.inertia << ") unmatched\n";
            ok = false;
        }
    if (cmp.total_mass != cmp.expected_total_mass) {
        diag << "total mass " << rat_str(cmp.total_mass) << " != " << rat_str(cmp.expected_total_mass) << "\n";
        ok = false;
    }
    cmp.all_match = ok;
    cmp.diagnostics = diag.str();
    return cmp;
}

} // namespace trigstat
