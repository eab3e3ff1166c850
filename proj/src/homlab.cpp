#include "pmforge/homlab.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "pmforge/intervals.hpp"

namespace pmforge {

namespace {

std::size_t position_of(const std::vector<std::size_t>& sorted, std::size_t k) {
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), k) - sorted.begin());
}

// Per-grade data of the presentation sweep.
struct Grade {
    // generators whose grade lies below this one
    std::vector<std::size_t> ids;
    // columns: images of those generators in M
    Matrix g;
    // images in N of the unknowns x_k, as maps N_{a_k} -> N_here; only kept where N is nonzero
    std::vector<Matrix> t;
    // relations among ids (vectors c with g c = 0); only kept where N is nonzero
    std::vector<Vector> kernel;
};

class PresentationSolver {
public:
    PresentationSolver(const PersistenceModule& m, const PersistenceModule& n)
        : m_(m), n_(n), f_(m.field()), gens_(compute_generators(m)), eq_(f_, 0) {
        if (m.field() != n.field()) throw MismatchError("modules are over different fields");
        if (m.n() != n.n()) throw MismatchError("modules have different ambient dimensions");
        std::size_t w = 0;
        for (const auto& g : gens_) {
            offset_.push_back(w);
            target_dims_.push_back(n.dim(g.grade));
            w += n.dim(g.grade);
        }
        width_ = w;
        eq_ = RowEchelon(f_, width_);
    }

    void sweep() {
        if (width_ == 0) return;
        auto mb = m_.box();
        auto nb = n_.box();
        LatticePoint lo = mb->lo;
        LatticePoint hi = LatticePoint::meet(mb->hi + LatticePoint::constant(m_.n(), 1), nb->hi);
        if (!lo.leq(hi)) return;
        lo_ = lo;
        hi_ = hi;
        std::map<LatticePoint, std::vector<std::size_t>> gens_at;
        for (std::size_t k = 0; k < gens_.size(); ++k) gens_at[gens_[k].grade].push_back(k);

        for (const auto& a : grid_points(lo, hi)) {
            Grade gr{{}, Matrix(f_, 0, 0), {}, {}};
            // generators below a: union over predecessors, plus those born here
            std::vector<const Grade*> pred(m_.n(), nullptr);
            for (std::size_t j = 0; j < m_.n(); ++j) {
                if (a[j] == lo[j]) continue;
                auto it = grades_.find(a.stepped(j, -1));
                if (it == grades_.end()) continue;
                pred[j] = &it->second;
                std::vector<std::size_t> merged;
                std::set_union(gr.ids.begin(), gr.ids.end(), it->second.ids.begin(), it->second.ids.end(),
                               std::back_inserter(merged));
                gr.ids.swap(merged);
            }
            if (auto it = gens_at.find(a); it != gens_at.end()) {
                std::vector<std::size_t> merged;
                std::set_union(gr.ids.begin(), gr.ids.end(), it->second.begin(), it->second.end(),
                               std::back_inserter(merged));
                gr.ids.swap(merged);
            }
            if (gr.ids.empty()) continue;

            const std::size_t dm = m_.dim(a), dn = n_.dim(a), cnt = gr.ids.size();
            // predecessor used for each generator: first axis that already sees it
            std::vector<int> via(cnt, -1);
            std::vector<std::size_t> via_pos(cnt, 0);
            for (std::size_t c = 0; c < cnt; ++c) {
                std::size_t k = gr.ids[c];
                if (gens_[k].grade == a) continue;
                for (std::size_t j = 0; j < m_.n(); ++j) {
                    if (!pred[j]) continue;
                    std::size_t p = position_of(pred[j]->ids, k);
                    if (p < pred[j]->ids.size() && pred[j]->ids[p] == k) {
                        via[c] = static_cast<int>(j);
                        via_pos[c] = p;
                        break;
                    }
                }
            }

            gr.g = Matrix(f_, dm, cnt);
            if (dm > 0) {
                std::vector<std::optional<Matrix>> pushed(m_.n());
                for (std::size_t c = 0; c < cnt; ++c) {
                    if (via[c] < 0) {
                        const Vector& v = gens_[gr.ids[c]].vector;
                        for (std::size_t r = 0; r < dm; ++r) gr.g.set(r, c, v[r]);
                        continue;
                    }
                    std::size_t j = static_cast<std::size_t>(via[c]);
                    if (pred[j]->g.rows() == 0) continue;
                    if (!pushed[j]) pushed[j] = m_.edge(a.stepped(j, -1), j) * pred[j]->g;
                    for (std::size_t r = 0; r < dm; ++r) gr.g.set(r, c, pushed[j]->at(r, via_pos[c]));
                }
            }

            if (dn > 0) {
                gr.t.reserve(cnt);
                for (std::size_t c = 0; c < cnt; ++c) {
                    std::size_t k = gr.ids[c];
                    if (via[c] < 0) {
                        gr.t.push_back(Matrix::identity(f_, dn));
                        continue;
                    }
                    std::size_t j = static_cast<std::size_t>(via[c]);
                    const Grade* p = pred[j];
                    if (p->t.empty())
                        gr.t.emplace_back(f_, dn, target_dims_[k]);
                    else
                        gr.t.push_back(n_.edge(a.stepped(j, -1), j) * p->t[via_pos[c]]);
                }
                add_relations(gr, pred);
            }
            grades_.emplace(a, std::move(gr));
            if (eq_.rank() == width_ && !keep_going_) break;
        }
    }

    std::size_t dimension() const { return width_ - eq_.rank(); }

    HomBasis basis() {
        keep_going_ = true;
        sweep();
        HomBasis out;
        out.generators = gens_;
        out.target_dims = target_dims_;
        out.coords = eq_.kernel();
        out.elements.resize(out.coords.size());
        if (out.coords.empty()) return out;
        for (const auto& [a, dm] : m_.dims()) {
            std::size_t dn = n_.dim(a);
            if (dn == 0) continue;
            const Grade& gr = grades_.at(a);
            Matrix g = gr.g;
            std::vector<std::size_t> piv = row_reduce(g);
            if (piv.size() != dm) throw Error("generators fail to span the module at " + a.to_string());
            std::vector<std::size_t> rows(dm);
            for (std::size_t r = 0; r < dm; ++r) rows[r] = r;
            auto ginv = inverse(gr.g.select(rows, piv));
            for (std::size_t e = 0; e < out.coords.size(); ++e) {
                const Vector& x = out.coords[e];
                Matrix p(f_, dn, dm);
                for (std::size_t c = 0; c < piv.size(); ++c) {
                    std::size_t k = gr.ids[piv[c]];
                    Vector xk(x.begin() + static_cast<long>(offset_[k]),
                              x.begin() + static_cast<long>(offset_[k] + target_dims_[k]));
                    Vector col = gr.t[piv[c]].apply(xk);
                    for (std::size_t r = 0; r < dn; ++r) p.set(r, c, col[r]);
                }
                Matrix blk = p * *ginv;
                if (!blk.is_zero()) out.elements[e].blocks.emplace(a, std::move(blk));
            }
        }
        return out;
    }

private:
    void add_relations(Grade& gr, const std::vector<const Grade*>& pred) {
        const std::size_t cnt = gr.ids.size();
        const std::size_t dm = gr.g.rows();
        const std::size_t kdim = cnt - dm;
        if (kdim == 0) return;
        auto embed = [&](const Grade& p, const Vector& v) {
            Vector out(cnt, f_.zero());
            for (std::size_t i = 0; i < p.ids.size(); ++i) out[position_of(gr.ids, p.ids[i])] = v[i];
            return out;
        };
        // a predecessor whose relations already have full dimension implies everything here
        for (const Grade* p : pred)
            if (p && !p->t.empty() && p->kernel.size() == kdim) {
                for (const auto& v : p->kernel) gr.kernel.push_back(embed(*p, v));
                return;
            }
        gr.kernel = nullspace_basis(gr.g);
        if (gr.kernel.size() != kdim) throw Error("generators fail to span the module");
        RowEchelon implied(f_, cnt);
        for (const Grade* p : pred)
            if (p && !p->t.empty())
                for (const auto& v : p->kernel) implied.insert(embed(*p, v));
        if (implied.rank() == kdim) return;
        const std::size_t dn = gr.t.front().rows();
        for (const auto& c : gr.kernel) {
            if (!implied.insert(c)) continue;
            for (std::size_t r = 0; r < dn; ++r) {
                Vector row(width_, f_.zero());
                bool any = false;
                for (std::size_t i = 0; i < cnt; ++i) {
                    if (Field::is_zero(c[i])) continue;
                    std::size_t k = gr.ids[i];
                    const Matrix& t = gr.t[i];
                    for (std::size_t s = 0; s < t.cols(); ++s) {
                        Scalar v = t.at(r, s);
                        if (Field::is_zero(v)) continue;
                        row[offset_[k] + s] = f_.add(row[offset_[k] + s], f_.mul(c[i], v));
                        any = true;
                    }
                }
                if (any) eq_.insert(std::move(row));
            }
        }
    }

    const PersistenceModule& m_;
    const PersistenceModule& n_;
    Field f_;
    std::vector<Generator> gens_;
    std::vector<std::size_t> offset_;
    std::vector<std::size_t> target_dims_;
    std::size_t width_ = 0;
    RowEchelon eq_;
    LatticePoint lo_, hi_;
    std::map<LatticePoint, Grade> grades_;
    bool keep_going_ = false;
};

}  // namespace

HomBasis hom_basis(const PersistenceModule& m, const PersistenceModule& n) {
    PresentationSolver s(m, n);
    return s.basis();
}

std::size_t hom_dim(const PersistenceModule& m, const PersistenceModule& n) {
    PresentationSolver s(m, n);
    s.sweep();
    return s.dimension();
}

std::size_t end_dim(const PersistenceModule& m) { return hom_dim(m, m); }

HomBasis hom_basis_naive(const PersistenceModule& m, const PersistenceModule& n) {
    if (m.field() != n.field()) throw MismatchError("modules are over different fields");
    if (m.n() != n.n()) throw MismatchError("modules have different ambient dimensions");
    const Field& f = m.field();
    std::map<LatticePoint, std::size_t> offset;
    std::size_t width = 0;
    for (const auto& [a, dm] : m.dims()) {
        std::size_t dn = n.dim(a);
        if (dn == 0) continue;
        offset[a] = width;
        width += dn * dm;
    }
    RowEchelon eq(f, width);
    for (const auto& [a, dm] : m.dims()) {
        for (std::size_t j = 0; j < m.n(); ++j) {
            LatticePoint q = a.stepped(j, 1);
            std::size_t dnq = n.dim(q);
            if (dnq == 0) continue;
            Matrix ne = n.edge(a, j);
            Matrix me = m.edge(a, j);
            std::size_t dna = n.dim(a), dmq = m.dim(q);
            for (std::size_t r = 0; r < dnq; ++r)
                for (std::size_t c = 0; c < dm; ++c) {
                    Vector row(width, f.zero());
                    // (N edge * f_a)[r][c]
                    if (dna > 0)
                        for (std::size_t s = 0; s < dna; ++s)
                            row[offset[a] + s * dm + c] = f.add(row[offset[a] + s * dm + c], ne.at(r, s));
                    // - (f_q * M edge)[r][c]
                    if (dmq > 0)
                        for (std::size_t t = 0; t < dmq; ++t)
                            row[offset[q] + r * dmq + t] = f.sub(row[offset[q] + r * dmq + t], me.at(t, c));
                    eq.insert(std::move(row));
                }
        }
    }
    HomBasis out;
    out.coords = eq.kernel();
    for (const auto& x : out.coords) {
        HomElement e;
        for (const auto& [a, off] : offset) {
            std::size_t dm = m.dim(a), dn = n.dim(a);
            Matrix blk(f, dn, dm);
            for (std::size_t r = 0; r < dn; ++r)
                for (std::size_t c = 0; c < dm; ++c) blk.set(r, c, x[off + r * dm + c]);
            if (!blk.is_zero()) e.blocks.emplace(a, std::move(blk));
        }
        out.elements.push_back(std::move(e));
    }
    return out;
}

HomElement compose(const HomElement& f, const HomElement& g, const PersistenceModule& a, const PersistenceModule& b,
                   const PersistenceModule& c) {
    return compose_blocks(f, g, a, b, c);
}

HomElement linear_combination(const Field& field, const std::vector<HomElement>& basis, const Vector& coeffs) {
    if (coeffs.size() != basis.size()) throw ShapeError("coefficient count must match the basis");
    HomElement out;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (Field::is_zero(coeffs[i])) continue;
        for (const auto& [p, blk] : basis[i].blocks) {
            Matrix term = blk.scaled(coeffs[i]);
            auto it = out.blocks.find(p);
            if (it == out.blocks.end())
                out.blocks.emplace(p, std::move(term));
            else
                it->second = it->second + term;
        }
    }
    for (auto it = out.blocks.begin(); it != out.blocks.end();) {
        if (it->second.is_zero())
            it = out.blocks.erase(it);
        else
            ++it;
    }
    (void)field;
    return out;
}

std::optional<Vector> coordinates_in(const HomBasis& basis, const HomElement& f, const PersistenceModule& m) {
    const Field& fld = m.field();
    std::size_t width = 0;
    for (auto d : basis.target_dims) width += d;
    Vector x;
    x.reserve(width);
    for (std::size_t k = 0; k < basis.generators.size(); ++k) {
        const auto& g = basis.generators[k];
        Vector img = f.block(fld, g.grade, basis.target_dims[k], m.dim(g.grade)).apply(g.vector);
        x.insert(x.end(), img.begin(), img.end());
    }
    Matrix a(fld, width, basis.coords.size());
    for (std::size_t c = 0; c < basis.coords.size(); ++c)
        for (std::size_t r = 0; r < width; ++r) a.set(r, c, basis.coords[c][r]);
    return solve(a, x);
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::indecomposable_dim1: return "indecomposable_dim1";
        case Verdict::indecomposable_no_idempotent: return "indecomposable_no_idempotent";
        case Verdict::decomposable: return "decomposable";
        case Verdict::unknown: return "unknown";
    }
    return "unknown";
}

bool is_nontrivial_idempotent(const HomElement& e, const PersistenceModule& m) {
    if (e.is_zero()) return false;
    if (check_homomorphism(e, m, m)) return false;
    if (compose(e, e, m, m, m) != e) return false;
    return e != identity_hom(m);
}

namespace {

std::vector<std::set<LatticePoint>> support_components(const PersistenceModule& m) {
    std::set<LatticePoint> supp = m.support_set(), seen;
    std::vector<std::set<LatticePoint>> out;
    for (const auto& start : supp) {
        if (seen.count(start)) continue;
        std::set<LatticePoint> comp;
        std::deque<LatticePoint> queue{start};
        seen.insert(start);
        while (!queue.empty()) {
            LatticePoint p = queue.front();
            queue.pop_front();
            comp.insert(p);
            for (std::size_t j = 0; j < p.dim(); ++j)
                for (int d : {-1, 1}) {
                    LatticePoint q = p.stepped(j, d);
                    if (!supp.count(q) || seen.count(q)) continue;
                    // only nonzero structure maps tie grades together
                    const LatticePoint& src = d > 0 ? p : q;
                    if (m.edge(src, j).is_zero()) continue;
                    seen.insert(q);
                    queue.push_back(q);
                }
        }
        out.push_back(std::move(comp));
    }
    return out;
}

// Advances a base-p counter; false once it wraps to zero.
bool next_tuple(std::vector<std::int64_t>& digits, std::int64_t p) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < p) return true;
        digits[i] = 0;
    }
    return false;
}

std::uint64_t space_size(std::int64_t p, std::size_t d, std::uint64_t cap) {
    std::uint64_t s = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (s > cap / static_cast<std::uint64_t>(p)) return cap + 1;
        s *= static_cast<std::uint64_t>(p);
    }
    return s;
}

}  // namespace

IndecomposabilityVerdict indecomposable(const PersistenceModule& m, std::uint64_t budget) {
    IndecomposabilityVerdict out;
    if (m.is_zero()) {
        out.note = "zero module";
        return out;
    }
    auto comps = support_components(m);
    if (comps.size() > 1) {
        out.verdict = Verdict::decomposable;
        std::vector<LatticePoint> first(comps[0].begin(), comps[0].end()), rest;
        for (std::size_t i = 1; i < comps.size(); ++i) rest.insert(rest.end(), comps[i].begin(), comps[i].end());
        std::sort(rest.begin(), rest.end());
        out.support_split = std::make_pair(std::move(first), std::move(rest));
        out.note = "support splits into " + std::to_string(comps.size()) + " pieces joined only by zero maps";
        out.end_dim = end_dim(m);
        return out;
    }
    HomBasis basis = hom_basis(m, m);
    const std::size_t d = basis.dim();
    out.end_dim = d;
    if (d == 1) {
        out.verdict = Verdict::indecomposable_dim1;
        return out;
    }
    const Field& f = m.field();
    if (!f.is_prime()) {
        out.note = "idempotent search needs a prime field";
        return out;
    }
    // structure constants: b_i o b_j in basis coordinates
    std::vector<std::vector<Vector>> mult(d, std::vector<Vector>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            auto c = coordinates_in(basis, compose(basis.elements[i], basis.elements[j], m, m, m), m);
            if (!c) throw Error("End(M) is not closed under composition");
            mult[i][j] = std::move(*c);
        }
    auto id = coordinates_in(basis, identity_hom(m), m);
    if (!id) throw Error("identity is missing from End(M)");

    const std::int64_t p = f.characteristic();
    const std::uint64_t total = space_size(p, d, budget);
    std::vector<std::int64_t> digits(d, 0);
    std::uint64_t tried = 0;
    Vector a(d), sq(d);
    while (next_tuple(digits, p)) {
        if (++tried > budget) {
            out.note = "search budget of " + std::to_string(budget) + " candidates exhausted";
            return out;
        }
        for (std::size_t i = 0; i < d; ++i) a[i] = f.from_int(digits[i]);
        if (a == *id) continue;
        std::fill(sq.begin(), sq.end(), f.zero());
        for (std::size_t i = 0; i < d; ++i) {
            if (Field::is_zero(a[i])) continue;
            for (std::size_t j = 0; j < d; ++j) {
                if (Field::is_zero(a[j])) continue;
                Scalar s = f.mul(a[i], a[j]);
                for (std::size_t k = 0; k < d; ++k) sq[k] = f.add(sq[k], f.mul(s, mult[i][j][k]));
            }
        }
        if (sq == a) {
            out.verdict = Verdict::decomposable;
            out.idempotent = linear_combination(f, basis.elements, a);
            out.note = "nontrivial idempotent found";
            return out;
        }
    }
    (void)total;
    out.verdict = Verdict::indecomposable_no_idempotent;
    out.note = "no nontrivial idempotent among " + std::to_string(tried) + " candidates";
    return out;
}

namespace {

std::optional<HomElement> pointwise_inverse(const HomElement& f, const PersistenceModule& m) {
    HomElement inv;
    for (const auto& [p, d] : m.dims()) {
        auto it = f.blocks.find(p);
        if (it == f.blocks.end()) return std::nullopt;
        auto i = inverse(it->second);
        if (!i) return std::nullopt;
        inv.blocks.emplace(p, std::move(*i));
    }
    return inv;
}

}  // namespace

IsoResult are_isomorphic(const PersistenceModule& m, const PersistenceModule& n, std::size_t trials,
                         std::uint64_t seed, std::uint64_t budget) {
    IsoResult out;
    if (m.field() != n.field() || m.n() != n.n()) {
        out.answer = IsoAnswer::no;
        out.reason = "different field or ambient dimension";
        return out;
    }
    if (m.dims() != n.dims()) {
        out.answer = IsoAnswer::no;
        out.reason = "pointwise dimensions differ";
        return out;
    }
    if (m.is_zero()) {
        out.answer = IsoAnswer::yes;
        out.forward = HomElement{};
        out.backward = HomElement{};
        return out;
    }
    HomBasis basis = hom_basis(m, n);
    const Field& f = m.field();
    const std::size_t d = basis.dim();
    if (d == 0) {
        out.answer = IsoAnswer::no;
        out.reason = "Hom(M, N) = 0";
        return out;
    }
    auto accept = [&](const HomElement& h) {
        auto inv = pointwise_inverse(h, m);
        if (!inv) return false;
        out.answer = IsoAnswer::yes;
        out.forward = h;
        out.backward = std::move(*inv);
        return true;
    };
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        Vector c(d);
        for (auto& x : c) {
            if (f.is_prime())
                x = f.from_int(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f.characteristic())));
            else
                x = f.from_int(static_cast<std::int64_t>(rng() % 11) - 5);
        }
        if (accept(linear_combination(f, basis.elements, c))) return out;
    }
    if (f.is_prime() && space_size(f.characteristic(), d, budget) <= budget) {
        std::vector<std::int64_t> digits(d, 0);
        Vector c(d);
        while (next_tuple(digits, f.characteristic())) {
            for (std::size_t i = 0; i < d; ++i) c[i] = f.from_int(digits[i]);
            if (accept(linear_combination(f, basis.elements, c))) return out;
        }
        out.answer = IsoAnswer::no;
        out.reason = "exhaustive scan of Hom(M, N) found no pointwise-invertible element";
        return out;
    }
    out.reason = "no isomorphism among " + std::to_string(trials) + " random samples";
    return out;
}

PersistenceModule build_be2_family(std::size_t d, Scalar lambda, const Field& field) {
    if (d == 0) throw ShapeError("d must be at least 1");
    auto rect = [](int lo, int hi) { return IntervalSupport::rectangle({LatticePoint{lo}, LatticePoint{hi}}); };
    std::vector<IntervalSupport> layer0, layer1;
    for (std::size_t i = 0; i < d; ++i) layer0.push_back(rect(1, 4));
    for (std::size_t i = 0; i < d; ++i) layer0.push_back(rect(2, 3));
    for (std::size_t i = 0; i < d; ++i) layer1.push_back(rect(0, 3));
    for (std::size_t i = 0; i < d; ++i) layer1.push_back(rect(1, 2));
    // [[I, I], [I, J_d(lambda)]]
    std::vector<std::vector<Scalar>> coeffs(2 * d, std::vector<Scalar>(2 * d, field.zero()));
    for (std::size_t i = 0; i < d; ++i) {
        coeffs[i][i] = field.one();
        coeffs[i][d + i] = field.one();
        coeffs[d + i][i] = field.one();
        coeffs[d + i][d + i] = lambda;
        if (i + 1 < d) coeffs[d + i][d + i + 1] = field.one();
    }
    PersistenceModule l0 = interval_sum(layer0, field, 1);
    PersistenceModule l1 = interval_sum(layer1, field, 1);
    HomElement phi = interval_sum_map(layer0, layer1, coeffs, field);
    return stack_layers({l0, l1}, {phi});
}

}  // namespace pmforge
