#include "tcs/matching.hpp"

#include "tcs/normal_form.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

namespace tcs {

namespace {

LatticePtr k3() { return standard_lattice("K3"); }

Int dot(const IMat& gram, const std::vector<Int>& a, const std::vector<Int>& b) {
    __int128 acc = 0;
    for (std::size_t i = 0; i < gram.rows; ++i) {
        if (a[i] == 0) continue;
        __int128 row = 0;
        for (std::size_t j = 0; j < gram.cols; ++j) row += static_cast<__int128>(gram(i, j)) * b[j];
        acc += static_cast<__int128>(a[i]) * row;
    }
    if (acc > INT64_MAX || acc < INT64_MIN) throw std::overflow_error("pairing overflow");
    return static_cast<Int>(acc);
}

std::vector<Int> gcd_normalized(std::vector<Int> v) {
    Int g = 0;
    for (Int c : v) g = std::gcd(g, c);
    if (g > 1)
        for (Int& c : v) c /= g;
    for (Int c : v) {
        if (c == 0) continue;
        if (c < 0)
            for (Int& x : v) x = -x;
        break;
    }
    return v;
}

bool is_coord_primitive(const std::vector<Int>& v) {
    Int g = 0;
    for (Int c : v) g = std::gcd(g, c);
    return g == 1;
}

/// Next k-subset of {0..n-1} in lexicographic order.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t size = c.size();
    std::size_t i = size;
    while (i > 0) {
        --i;
        if (c[i] + (size - i) < n) {
            ++c[i];
            for (std::size_t j = i + 1; j < size; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

/// Candidates v = offset + sum_i c_i basis[i], enumerated support by support:
/// sizes ascending, index tuples in lexicographic order, digits per position
/// in the order 1, -1, 2, -2, ..., radius, -radius (all positions nonzero, so
/// no candidate repeats). The visit callback returns true to stop.
class AffineSearch {
  public:
    AffineSearch(const GramLattice& ambient, std::vector<Int> offset,
                 std::vector<std::vector<Int>> basis)
        : ambient_(ambient), offset_(std::move(offset)), basis_(std::move(basis)) {
        offset_square_ = dot(ambient_.gram, offset_, offset_);
        const std::size_t k = basis_.size();
        cross_.resize(k);
        gram_ = IMat(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            cross_[i] = dot(ambient_.gram, offset_, basis_[i]);
            for (std::size_t j = i; j < k; ++j)
                gram_(i, j) = gram_(j, i) = dot(ambient_.gram, basis_[i], basis_[j]);
        }
    }

    const IMat& basis_gram() const { return gram_; }

    std::vector<Int> realize(const std::vector<std::size_t>& support,
                             const std::vector<Int>& digits) const {
        std::vector<Int> v = offset_;
        for (std::size_t t = 0; t < support.size(); ++t)
            for (std::size_t j = 0; j < v.size(); ++j) v[j] += digits[t] * basis_[support[t]][j];
        return v;
    }

    Int square_of(const std::vector<std::size_t>& support, const std::vector<Int>& digits) const {
        Int s = offset_square_;
        for (std::size_t t = 0; t < support.size(); ++t) {
            s += 2 * digits[t] * cross_[support[t]];
            for (std::size_t u = 0; u < support.size(); ++u)
                s += digits[t] * digits[u] * gram_(support[t], support[u]);
        }
        return s;
    }

    /// visit(support, digits) -> bool (stop). skip_window(support) -> bool.
    template <class Visit, class SkipWindow>
    bool run(Int radius, std::size_t max_support, bool include_empty, Visit&& visit,
             SkipWindow&& skip_window) const {
        const std::size_t k = basis_.size();
        std::vector<Int> digit_seq;
        for (Int d = 1; d <= radius; ++d) {
            digit_seq.push_back(d);
            digit_seq.push_back(-d);
        }
        if (include_empty && visit(std::vector<std::size_t>{}, std::vector<Int>{})) return true;
        if (digit_seq.empty()) return false;
        for (std::size_t size = 1; size <= std::min(max_support, k); ++size) {
            std::vector<std::size_t> support(size);
            std::iota(support.begin(), support.end(), 0);
            do {
                if (skip_window(support)) continue;
                std::vector<std::size_t> idx(size, 0);
                std::vector<Int> digits(size, digit_seq[0]);
                while (true) {
                    if (visit(support, digits)) return true;
                    // odometer, last position fastest
                    std::size_t pos = size;
                    while (pos > 0) {
                        --pos;
                        if (++idx[pos] < digit_seq.size()) break;
                        idx[pos] = 0;
                    }
                    for (std::size_t t = 0; t < size; ++t) digits[t] = digit_seq[idx[t]];
                    if (pos == 0 && idx[0] == 0) break;  // wrapped around
                }
            } while (next_combination(support, k));
        }
        return false;
    }

  private:
    const GramLattice& ambient_;
    std::vector<Int> offset_;
    std::vector<std::vector<Int>> basis_;
    Int offset_square_ = 0;
    std::vector<Int> cross_;
    IMat gram_;
};

/// Integer solution set of (v, t_i) = c_i restricted to the allowed
/// coordinates: a particular solution plus a kernel basis, or nullopt when no
/// integral solution exists.
struct PairingSolution {
    std::vector<Int> offset;
    std::vector<std::vector<Int>> kernel;
};

std::optional<PairingSolution> solve_pairings(const GramLattice& ambient,
                                              const std::vector<std::vector<Int>>& targets,
                                              const std::vector<Int>& values,
                                              const std::vector<std::size_t>& allowed) {
    const std::size_t k = targets.size(), m = allowed.size(), n = ambient.rank();
    IMat p(k, m);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Int> grad(n, 0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t t = 0; t < n; ++t) grad[j] += ambient.gram(j, t) * targets[i][t];
        for (std::size_t j = 0; j < m; ++j) p(i, j) = grad[allowed[j]];
    }

    auto snf = smith_normal_form(to_big(p));
    // left * p * right = d; solve d u = left * c, v = right * u.
    std::vector<BigInt> lc(k, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) lc[i] += snf.left(i, j) * BigInt(values[j]);
    std::vector<BigInt> u(m, 0);
    for (std::size_t i = 0; i < k; ++i) {
        const BigInt di = i < std::min(k, m) ? snf.d(i, i) : BigInt(0);
        if (di == 0) {
            if (lc[i] != 0) return std::nullopt;
        } else {
            if (lc[i] % di != 0) return std::nullopt;
            u[i] = lc[i] / di;
        }
    }
    std::vector<Int> offset(n, 0);
    for (std::size_t j = 0; j < m; ++j) {
        BigInt acc = 0;
        for (std::size_t i = 0; i < m; ++i) acc += snf.right(j, i) * u[i];
        offset[allowed[j]] = to_int_checked(acc, "pairing solution coefficient");
    }

    IMat ker = kernel_rows_exact(p);
    std::vector<std::vector<Int>> kernel;
    for (std::size_t i = 0; i < ker.rows; ++i) {
        std::vector<Int> row(n, 0);
        for (std::size_t j = 0; j < m; ++j) row[allowed[j]] = ker(i, j);
        kernel.push_back(std::move(row));
    }
    return PairingSolution{std::move(offset), std::move(kernel)};
}

constexpr std::size_t kMaxSupport = 3;

std::vector<std::size_t> all_coords_except(const GramLattice& l,
                                           const std::set<std::size_t>& reserved_summands) {
    std::vector<std::size_t> allowed;
    std::set<std::size_t> banned;
    for (std::size_t s : reserved_summands) {
        if (s >= l.hyperbolic_pairs.size())
            throw std::invalid_argument("reserved summand index out of range");
        banned.insert(l.hyperbolic_pairs[s].first);
        banned.insert(l.hyperbolic_pairs[s].second);
    }
    for (std::size_t i = 0; i < l.rank(); ++i)
        if (!banned.count(i)) allowed.push_back(i);
    return allowed;
}

bool summand_untouched(const GramLattice& l, std::size_t summand,
                       const std::vector<std::vector<Int>>& vectors) {
    auto [i, j] = l.hyperbolic_pairs[summand];
    for (const auto& v : vectors)
        if (v[i] != 0 || v[j] != 0) return false;
    return true;
}

/// First positive direction of the induced form, as a primitive integer
/// vector, found by rational congruence diagonalization with basis tracking.
std::optional<std::vector<Int>> positive_vector_by_diagonalization(const Sublattice& s) {
    const std::size_t k = s.rank();
    if (k == 0) return std::nullopt;
    IMat ig = s.induced_gram();
    Matrix<BigRat> a(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) a(i, j) = BigRat(ig(i, j));
    Matrix<BigRat> basis(k, s.ambient->rank());
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < s.ambient->rank(); ++j) basis(i, j) = BigRat(s.basis[i][j]);

    for (std::size_t t = 0; t < k; ++t) {
        if (a(t, t) == 0) {
            for (std::size_t j = t + 1; j < k; ++j)
                if (a(j, j) != 0) {
                    a.swap_rows(t, j);
                    a.swap_cols(t, j);
                    basis.swap_rows(t, j);
                    break;
                }
        }
        if (a(t, t) == 0) {
            for (std::size_t j = t + 1; j < k; ++j)
                if (a(t, j) != 0) {
                    a.add_row(t, j, BigRat(1));
                    a.add_col(t, j, BigRat(1));
                    basis.add_row(t, j, BigRat(1));
                    break;
                }
        }
        if (a(t, t) == 0) continue;
        if (a(t, t) > 0) {
            // Clear denominators and content; the square stays positive.
            BigInt lcm = 1;
            for (std::size_t j = 0; j < basis.cols; ++j)
                lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(basis(t, j)));
            std::vector<Int> v(basis.cols);
            for (std::size_t j = 0; j < basis.cols; ++j)
                v[j] = to_int_checked(
                    boost::multiprecision::numerator(basis(t, j) * BigRat(lcm)),
                    "positive direction coefficient");
            return gcd_normalized(std::move(v));
        }
        const BigRat pivot = a(t, t);
        for (std::size_t i = t + 1; i < k; ++i) {
            if (a(i, t) == 0) continue;
            BigRat c = -a(i, t) / pivot;
            a.add_row(i, t, c);
            a.add_col(i, t, c);
            basis.add_row(i, t, c);
        }
    }
    return std::nullopt;
}

}  // namespace

LatticeVector Embedding::apply(const std::vector<Int>& source_coords) const {
    if (source_coords.size() != matrix.cols)
        throw std::invalid_argument("source coordinate length mismatch");
    std::vector<Int> out(matrix.rows, 0);
    for (std::size_t j = 0; j < matrix.cols; ++j)
        for (std::size_t i = 0; i < matrix.rows; ++i) out[i] += matrix(i, j) * source_coords[j];
    return LatticeVector{target, std::move(out)};
}

std::vector<LatticeVector> Embedding::image_vectors() const {
    std::vector<LatticeVector> out;
    for (std::size_t j = 0; j < matrix.cols; ++j) {
        std::vector<Int> v(matrix.rows);
        for (std::size_t i = 0; i < matrix.rows; ++i) v[i] = matrix(i, j);
        out.push_back(LatticeVector{target, std::move(v)});
    }
    return out;
}

Sublattice Embedding::image() const {
    std::vector<std::vector<Int>> basis;
    for (auto& v : image_vectors()) basis.push_back(v.coords);
    return Sublattice{target, std::move(basis)};
}

bool Embedding::gram_preserving() const {
    if (!target || matrix.rows != target->rank() || matrix.cols != source_gram.rows ||
        source_gram.rows != source_gram.cols)
        return false;
    const auto imgs = image_vectors();
    for (std::size_t i = 0; i < matrix.cols; ++i)
        for (std::size_t j = 0; j < matrix.cols; ++j)
            if (dot(target->gram, imgs[i].coords, imgs[j].coords) != source_gram(i, j))
                return false;
    return true;
}

std::string VerifyReport::to_string() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name;
        if (!c.required) os << " (informational)";
        if (!c.detail.empty()) os << ": " << c.detail;
        os << "\n";
    }
    os << (ok ? "certificate verified" : "certificate REJECTED") << "\n";
    return os.str();
}

LatticeVector embed_rank1(Int square, std::size_t summand_index, LatticePtr ambient) {
    if (!ambient) ambient = k3();
    if (square < 2 || square % 2 != 0)
        throw std::invalid_argument("embed_rank1 needs a positive even square, got " +
                                    std::to_string(square));
    if (summand_index >= ambient->hyperbolic_pairs.size())
        throw std::invalid_argument("lattice '" + ambient->label + "' has no hyperbolic summand " +
                                    std::to_string(summand_index));
    auto [i, j] = ambient->hyperbolic_pairs[summand_index];
    std::vector<Int> v(ambient->rank(), 0);
    v[i] = 1;
    v[j] = square / 2;
    return LatticeVector{ambient, std::move(v)};
}

namespace {

Embedding embedding_from_images(const PolarizedFanoClass& rec,
                                const std::vector<std::vector<Int>>& images) {
    auto target = k3();
    if (static_cast<Int>(images.size()) != rec.b2)
        throw validation_error("hint for '" + rec.name + "' has " +
                               std::to_string(images.size()) + " image rows, expected " +
                               std::to_string(rec.b2));
    IMat m(target->rank(), images.size());
    for (std::size_t j = 0; j < images.size(); ++j) {
        if (images[j].size() != target->rank())
            throw validation_error("hint image row " + std::to_string(j) + " has length " +
                                   std::to_string(images[j].size()) + ", expected 22");
        for (std::size_t i = 0; i < target->rank(); ++i) m(i, j) = images[j][i];
    }
    Embedding emb{rec.polarization, target, std::move(m)};

    for (std::size_t i = 0; i < emb.matrix.cols; ++i)
        for (std::size_t j = 0; j < emb.matrix.cols; ++j) {
            const Int got = dot(target->gram, emb.image_vectors()[i].coords,
                                emb.image_vectors()[j].coords);
            if (got != rec.polarization(i, j))
                throw validation_error(
                    "hint for '" + rec.name + "' is not Gram-preserving: entry (" +
                    std::to_string(i) + "," + std::to_string(j) + ") is " + std::to_string(got) +
                    ", expected " + std::to_string(rec.polarization(i, j)));
        }
    auto factors = invariant_factors_exact(emb.image().basis_matrix());
    for (const auto& f : factors)
        if (f != 1)
            throw validation_error("hint for '" + rec.name +
                                   "' has an imprimitive image: invariant factor " +
                                   f.str());
    return emb;
}

/// Unimodular 2x2 with first column equal to the (primitive) kahler vector.
IMat rank2_basis_change(const std::vector<Int>& kahler) {
    const Int k1 = kahler[0], k2 = kahler[1];
    Int u_prev = 1, u_cur = 0, v_prev = 0, v_cur = 1, a = k1, b = k2;
    // extended Euclid: u*k1 + v*k2 = gcd
    while (b != 0) {
        const Int q = a / b;
        a = std::exchange(b, a - q * b);
        u_prev = std::exchange(u_cur, u_prev - q * u_cur);
        v_prev = std::exchange(v_cur, v_prev - q * v_cur);
    }
    Int g = a, u = u_prev, v = v_prev;
    if (g < 0) {
        g = -g;
        u = -u;
        v = -v;
    }
    if (g != 1) throw validation_error("kahler vector is not primitive");
    return IMat{{k1, -v}, {k2, u}};
}

}  // namespace

Embedding embed_polarization(const PolarizedFanoClass& rec, const EmbedOptions& opts) {
    if (opts.hint) return embedding_from_images(rec, opts.hint->images);

    auto target = k3();
    const auto allowed = all_coords_except(*target, opts.reserved_summands);

    auto first_free_summand = [&](const std::vector<std::vector<Int>>& avoid) {
        for (std::size_t s = 0; s < target->hyperbolic_pairs.size(); ++s) {
            if (opts.reserved_summands.count(s)) continue;
            if (summand_untouched(*target, s, avoid)) return std::optional<std::size_t>(s);
        }
        return std::optional<std::size_t>{};
    };

    auto orthogonality_ok = [&](const std::vector<Int>& v) {
        for (const auto& o : opts.orthogonal_to)
            if (dot(target->gram, v, o.coords) != 0) return false;
        return true;
    };

    if (rec.b2 == 1) {
        LatticeVector u;
        if (opts.pinned_kahler) {
            u = *opts.pinned_kahler;
        } else {
            std::vector<std::vector<Int>> avoid;
            for (const auto& o : opts.orthogonal_to) avoid.push_back(o.coords);
            auto s = first_free_summand(avoid);
            if (s && orthogonality_ok(embed_rank1(rec.kahler_square, *s, target).coords)) {
                u = embed_rank1(rec.kahler_square, *s, target);
            } else {
                std::vector<std::vector<Int>> cb;
                for (const auto& o : opts.orthogonal_to) cb.push_back(o.coords);
                u = find_orthogonal_positive(Sublattice{target, cb}, rec.kahler_square,
                                             opts.radius);
            }
        }
        if (dot(target->gram, u.coords, u.coords) != rec.kahler_square)
            throw validation_error("pinned kahler image has square " +
                                   std::to_string(dot(target->gram, u.coords, u.coords)) +
                                   ", record expects " + std::to_string(rec.kahler_square));
        if (!orthogonality_ok(u.coords))
            throw validation_error("pinned kahler image violates an orthogonality constraint");
        // record basis vector = c * kahler with c = +-1
        const Int c = rec.kahler_vector[0];
        IMat m(target->rank(), 1);
        for (std::size_t i = 0; i < target->rank(); ++i) m(i, 0) = c * u.coords[i];
        return Embedding{rec.polarization, target, std::move(m)};
    }

    if (rec.b2 != 2)
        throw std::invalid_argument(
            "constructive embedding covers polarization ranks 1 and 2; rank " +
            std::to_string(rec.b2) + " needs an explicit hint");

    // Work in the basis (kahler, w): A = W^T S W.
    const IMat w_change = rank2_basis_change(rec.kahler_vector);
    IMat a(2, 2);
    {
        const IMat& s = rec.polarization;
        IMat tmp = s * w_change;
        a = w_change.transposed() * tmp;
    }

    LatticeVector u;
    if (opts.pinned_kahler) {
        u = *opts.pinned_kahler;
    } else {
        std::vector<std::vector<Int>> avoid;
        for (const auto& o : opts.orthogonal_to) avoid.push_back(o.coords);
        auto s = first_free_summand(avoid);
        if (!s || !orthogonality_ok(embed_rank1(a(0, 0), *s, target).coords)) {
            std::vector<std::vector<Int>> cb;
            for (const auto& o : opts.orthogonal_to) cb.push_back(o.coords);
            u = find_orthogonal_positive(Sublattice{target, cb}, a(0, 0), opts.radius);
        } else {
            u = embed_rank1(a(0, 0), *s, target);
        }
    }
    if (dot(target->gram, u.coords, u.coords) != a(0, 0))
        throw validation_error("kahler image square mismatch: " +
                               std::to_string(dot(target->gram, u.coords, u.coords)) + " vs " +
                               std::to_string(a(0, 0)));
    if (!orthogonality_ok(u.coords))
        throw validation_error("kahler image violates an orthogonality constraint");

    // Second image: (v,u) = a01, v orthogonal to the extra constraints,
    // v^2 = a11, and the pair must span a primitive sublattice.
    std::vector<std::vector<Int>> targets{u.coords};
    std::vector<Int> values{a(0, 1)};
    for (const auto& o : opts.orthogonal_to) {
        targets.push_back(o.coords);
        values.push_back(0);
    }
    auto sol = solve_pairings(*target, targets, values, allowed);
    if (!sol)
        throw search_exhausted("no integral solution for the pairing constraints of '" +
                               rec.name + "'");

    AffineSearch search(*target, sol->offset, sol->kernel);
    std::optional<std::vector<Int>> found;
    search.run(
        opts.radius, kMaxSupport, true,
        [&](const std::vector<std::size_t>& support, const std::vector<Int>& digits) {
            if (search.square_of(support, digits) != a(1, 1)) return false;
            auto v = search.realize(support, digits);
            IMat pair_m(target->rank(), 2);
            for (std::size_t i = 0; i < target->rank(); ++i) {
                pair_m(i, 0) = u.coords[i];
                pair_m(i, 1) = v[i];
            }
            if (rank_exact(pair_m) != 2) return false;
            for (const auto& f : invariant_factors_exact(pair_m))
                if (f != 1) return false;
            found = std::move(v);
            return true;
        },
        [](const std::vector<std::size_t>&) { return false; });
    if (!found)
        throw search_exhausted("second polarization image for '" + rec.name +
                               "' not found within radius " + std::to_string(opts.radius));

    // Columns: images of the record basis, via U * W^-1.
    IMat w_inv{{w_change(1, 1), -w_change(0, 1)}, {-w_change(1, 0), w_change(0, 0)}};
    IMat m(target->rank(), 2);
    for (std::size_t i = 0; i < target->rank(); ++i)
        for (std::size_t j = 0; j < 2; ++j)
            m(i, j) = u.coords[i] * w_inv(0, j) + (*found)[i] * w_inv(1, j);
    Embedding emb{rec.polarization, target, std::move(m)};
    if (!emb.gram_preserving())
        throw validation_error("internal: constructed embedding is not Gram-preserving");
    return emb;
}

LatticeVector find_orthogonal_positive(const Sublattice& constraints, Int square, Int radius) {
    if (square <= 0 || square % 2 != 0)
        throw std::invalid_argument("target square must be positive and even");
    auto ambient = constraints.ambient ? constraints.ambient : k3();
    Sublattice cons{ambient, constraints.basis};

    Sublattice comp = orthogonal_complement(cons);
    if (comp.rank() == 0) throw search_exhausted("complement has no positive part");
    auto sig = signature(comp.induced_gram());
    if (sig.p == 0) throw search_exhausted("complement has no positive part");

    // Canonical answer when a whole hyperbolic summand is untouched by the
    // constraints.
    for (std::size_t s = 0; s < ambient->hyperbolic_pairs.size(); ++s)
        if (summand_untouched(*ambient, s, cons.basis))
            return embed_rank1(square, s, ambient);

    AffineSearch search(*ambient, std::vector<Int>(ambient->rank(), 0), comp.basis);
    std::optional<std::vector<Int>> found;
    search.run(
        radius, kMaxSupport, false,
        [&](const std::vector<std::size_t>& support, const std::vector<Int>& digits) {
            if (search.square_of(support, digits) != square) return false;
            auto v = search.realize(support, digits);
            if (!is_coord_primitive(v)) return false;
            found = std::move(v);
            return true;
        },
        [&](const std::vector<std::size_t>& support) {
            // A window whose induced form has no positive direction cannot
            // reach a positive square.
            IMat sub(support.size(), support.size());
            for (std::size_t i = 0; i < support.size(); ++i)
                for (std::size_t j = 0; j < support.size(); ++j)
                    sub(i, j) = search.basis_gram()(support[i], support[j]);
            return signature(sub).p == 0;
        });
    if (!found)
        throw search_exhausted("no primitive vector of square " + std::to_string(square) +
                               " orthogonal to the constraints within radius " +
                               std::to_string(radius));
    return LatticeVector{ambient, std::move(*found)};
}

namespace {

std::vector<CheckResult> compute_checks(const MatchingCertificate& cert,
                                        const PolarizedFanoClass& rec1,
                                        const PolarizedFanoClass& rec2) {
    std::vector<CheckResult> out;
    auto add = [&](const std::string& name, bool pass, std::string detail = "",
                   bool required = true) {
        out.push_back(CheckResult{name, pass, required, std::move(detail)});
    };
    const auto& gram = cert.emb1.target->gram;
    const std::size_t n = cert.emb1.target->rank();

    const bool shape_ok =
        cert.emb1.matrix.rows == n && cert.emb2.matrix.rows == n &&
        static_cast<Int>(cert.emb1.source_rank()) == rec1.b2 &&
        static_cast<Int>(cert.emb2.source_rank()) == rec2.b2 && cert.kappa1.coords.size() == n &&
        cert.kappa2.coords.size() == n && cert.kappaK.coords.size() == n;
    add("shape_consistent", shape_ok);
    if (!shape_ok) return out;

    add("emb1_gram_preserving", cert.emb1.gram_preserving());
    add("emb2_gram_preserving", cert.emb2.gram_preserving());

    auto primitive_image = [&](const Embedding& e) {
        for (const auto& f : invariant_factors_exact(e.image().basis_matrix()))
            if (f != 1) return false;
        return true;
    };
    add("emb1_image_primitive", primitive_image(cert.emb1));
    add("emb2_image_primitive", primitive_image(cert.emb2));

    add("kappa1_is_embedded_kahler",
        cert.kappa1.coords == cert.emb1.apply(rec1.kahler_vector).coords);
    add("kappa2_is_embedded_kahler",
        cert.kappa2.coords == cert.emb2.apply(rec2.kahler_vector).coords);

    add("kappa1_primitive", !cert.kappa1.is_zero() && is_coord_primitive(cert.kappa1.coords));
    add("kappa2_primitive", !cert.kappa2.is_zero() && is_coord_primitive(cert.kappa2.coords));

    const Int s1 = dot(gram, cert.kappa1.coords, cert.kappa1.coords);
    const Int s2 = dot(gram, cert.kappa2.coords, cert.kappa2.coords);
    const Int sk = dot(gram, cert.kappaK.coords, cert.kappaK.coords);
    add("kappa1_square_matches_record", s1 == rec1.kahler_square && s1 == cert.kappa1_square,
        std::to_string(s1) + " vs record " + std::to_string(rec1.kahler_square));
    add("kappa2_square_matches_record", s2 == rec2.kahler_square && s2 == cert.kappa2_square,
        std::to_string(s2) + " vs record " + std::to_string(rec2.kahler_square));
    add("kappa12_orthogonal", dot(gram, cert.kappa1.coords, cert.kappa2.coords) == 0);

    {
        IMat pair_m(cert.emb1.target->rank(), 2);
        for (std::size_t i = 0; i < pair_m.rows; ++i) {
            pair_m(i, 0) = cert.kappa1.coords[i];
            pair_m(i, 1) = cert.kappa2.coords[i];
        }
        bool prim = rank_exact(pair_m) == 2;
        if (prim)
            for (const auto& f : invariant_factors_exact(pair_m))
                if (f != 1) prim = false;
        add("kappa_pair_rank2_primitive", prim);
    }

    add("kappaK_positive_square", sk > 0 && sk == cert.kappaK_square, std::to_string(sk));

    auto orth_image = [&](const LatticeVector& v, const Embedding& e) {
        for (const auto& img : e.image_vectors())
            if (dot(gram, v.coords, img.coords) != 0) return false;
        return true;
    };
    add("kappaK_orth_image1", orth_image(cert.kappaK, cert.emb1));
    add("kappaK_orth_image2", orth_image(cert.kappaK, cert.emb2));

    {
        IMat combined(cert.emb1.target->rank(), cert.emb1.source_rank() + cert.emb2.source_rank());
        for (std::size_t j = 0; j < cert.emb1.source_rank(); ++j)
            for (std::size_t i = 0; i < combined.rows; ++i) combined(i, j) = cert.emb1.matrix(i, j);
        for (std::size_t j = 0; j < cert.emb2.source_rank(); ++j)
            for (std::size_t i = 0; i < combined.rows; ++i)
                combined(i, cert.emb1.source_rank() + j) = cert.emb2.matrix(i, j);
        const Int r = static_cast<Int>(rank_exact(combined));
        add("span_rank_consistent", r == cert.span_rank,
            "recomputed " + std::to_string(r) + ", stored " + std::to_string(cert.span_rank));
        add("span_rank_lower_bound", r >= std::max(rec1.b2, rec2.b2) + 1,
            "r = " + std::to_string(r));
    }

    add("scaling_lambda1", cert.lambda1_sq * BigRat(s1) == BigRat(sk));
    add("scaling_lambda2", cert.lambda2_sq * BigRat(s2) == BigRat(sk));

    const bool strict1 = orth_image(cert.kappa2, cert.emb1);
    const bool strict2 = orth_image(cert.kappa1, cert.emb2);
    add("strict_kappa2_orth_image1", strict1, "", false);
    add("strict_kappa1_orth_image2", strict2, "", false);
    add("strict_flag_consistent", cert.strict_orthogonality == (strict1 && strict2),
        cert.strict_orthogonality ? "claimed strict" : "claimed non-strict");
    return out;
}

const char* kCaveat =
    "kappaK is an integral representative; genericity of the induced K3 periods is not "
    "certified by this data";

}  // namespace

MatchingCertificate build_matching(const PolarizedFanoClass& rec1, const PolarizedFanoClass& rec2,
                                   const MatchConfig& config) {
    auto target = k3();
    MatchingCertificate cert;
    cert.fano1 = rec1.name;
    cert.fano2 = rec2.name;
    cert.caveat = kCaveat;

    // 1: embed the first polarization.
    try {
        EmbedOptions o1;
        o1.radius = config.radius;
        o1.hint = config.hint1;
        cert.emb1 = embed_polarization(rec1, o1);
    } catch (const std::exception& e) {
        throw match_error("embed_polarization_1", e.what());
    }
    cert.kappa1 = cert.emb1.apply(rec1.kahler_vector);
    const auto im1 = cert.emb1.image_vectors();

    // 2 + 4: the second embedding, Kahler vector orthogonal to the first
    // image. A hint fixes everything; otherwise pick kappa2 constructively
    // and embed around it, preferring full cross-orthogonality.
    if (config.hint2) {
        try {
            EmbedOptions o2;
            o2.hint = config.hint2;
            cert.emb2 = embed_polarization(rec2, o2);
        } catch (const std::exception& e) {
            throw match_error("embed_polarization_2", e.what());
        }
        cert.kappa2 = cert.emb2.apply(rec2.kahler_vector);
        if (dot(target->gram, cert.kappa1.coords, cert.kappa2.coords) != 0)
            throw match_error("select_kappa2", "hinted kahler images are not orthogonal");
    } else {
        try {
            std::vector<std::vector<Int>> avoid;
            for (const auto& v : im1) avoid.push_back(v.coords);
            std::optional<LatticeVector> k2;
            for (std::size_t s = 0; s < target->hyperbolic_pairs.size() && !k2; ++s) {
                if (!summand_untouched(*target, s, avoid)) continue;
                k2 = embed_rank1(rec2.kahler_square, s, target);
            }
            if (!k2)
                k2 = find_orthogonal_positive(Sublattice{target, avoid}, rec2.kahler_square,
                                              config.radius);
            cert.kappa2 = *k2;
        } catch (const std::exception& e) {
            throw match_error("select_kappa2", e.what());
        }

        try {
            EmbedOptions o2;
            o2.radius = config.radius;
            o2.pinned_kahler = cert.kappa2;
            o2.orthogonal_to = im1;  // full cross-orthogonality first
            cert.emb2 = embed_polarization(rec2, o2);
        } catch (const search_exhausted&) {
            EmbedOptions o2;
            o2.radius = config.radius;
            o2.pinned_kahler = cert.kappa2;
            o2.orthogonal_to = {cert.kappa1};
            try {
                cert.emb2 = embed_polarization(rec2, o2);
            } catch (const std::exception& e) {
                throw match_error("embed_polarization_2", e.what());
            }
        } catch (const std::exception& e) {
            throw match_error("embed_polarization_2", e.what());
        }
    }

    // 3: the two kahler images span a primitive rank-2 sublattice.
    {
        IMat pair_m(target->rank(), 2);
        for (std::size_t i = 0; i < pair_m.rows; ++i) {
            pair_m(i, 0) = cert.kappa1.coords[i];
            pair_m(i, 1) = cert.kappa2.coords[i];
        }
        if (rank_exact(pair_m) != 2)
            throw match_error("kappa_pair_primitivity", "kahler images are linearly dependent");
        for (const auto& f : invariant_factors_exact(pair_m))
            if (f != 1)
                throw match_error("kappa_pair_primitivity",
                                  "kahler images span an imprimitive sublattice");
    }

    // 5: positive kappaK orthogonal to both images.
    const auto im2 = cert.emb2.image_vectors();
    std::vector<std::vector<Int>> both;
    for (const auto& v : im1) both.push_back(v.coords);
    for (const auto& v : im2) both.push_back(v.coords);
    try {
        std::optional<LatticeVector> kk;
        for (std::size_t s = 0; s < target->hyperbolic_pairs.size() && !kk; ++s)
            if (summand_untouched(*target, s, both)) kk = embed_rank1(2, s, target);
        if (!kk) {
            Sublattice comp = orthogonal_complement(Sublattice{target, both});
            auto v = positive_vector_by_diagonalization(comp);
            if (!v) throw search_exhausted("complement has no positive part");
            kk = LatticeVector{target, std::move(*v)};
        }
        cert.kappaK = *kk;
    } catch (const std::exception& e) {
        throw match_error("select_kappaK", e.what());
    }

    // 6: span rank and exact scaling ratios.
    {
        IMat combined(target->rank(), both.size());
        for (std::size_t j = 0; j < both.size(); ++j)
            for (std::size_t i = 0; i < combined.rows; ++i) combined(i, j) = both[j][i];
        cert.span_rank = static_cast<Int>(rank_exact(combined));
    }
    if (config.target_span_rank && *config.target_span_rank != cert.span_rank)
        throw match_error("span_rank",
                          "target span rank " + std::to_string(*config.target_span_rank) +
                              " not achieved: the construction yields rank " +
                              std::to_string(cert.span_rank) +
                              "; supply embedding hints to realize other ranks");

    cert.kappa1_square = dot(target->gram, cert.kappa1.coords, cert.kappa1.coords);
    cert.kappa2_square = dot(target->gram, cert.kappa2.coords, cert.kappa2.coords);
    cert.kappaK_square = dot(target->gram, cert.kappaK.coords, cert.kappaK.coords);
    cert.lambda1_sq = BigRat(cert.kappaK_square) / BigRat(cert.kappa1_square);
    cert.lambda2_sq = BigRat(cert.kappaK_square) / BigRat(cert.kappa2_square);

    auto orth_image = [&](const LatticeVector& v, const std::vector<LatticeVector>& image) {
        for (const auto& w : image)
            if (dot(target->gram, v.coords, w.coords) != 0) return false;
        return true;
    };
    cert.strict_orthogonality = orth_image(cert.kappa2, im1) && orth_image(cert.kappa1, im2);

    cert.checks = compute_checks(cert, rec1, rec2);
    for (const auto& c : cert.checks)
        if (c.required && !c.pass)
            throw match_error("verification", "check '" + c.name + "' failed: " + c.detail);
    return cert;
}

VerifyReport verify_certificate(const MatchingCertificate& cert, const PolarizedFanoClass& rec1,
                                const PolarizedFanoClass& rec2) {
    VerifyReport rep;
    if (cert.fano1 != rec1.name || cert.fano2 != rec2.name) {
        rep.checks.push_back(CheckResult{"record_names_match", false, true,
                                         cert.fano1 + "/" + cert.fano2 + " vs " + rec1.name +
                                             "/" + rec2.name});
        rep.ok = false;
        return rep;
    }
    rep.checks = compute_checks(cert, rec1, rec2);
    rep.ok = std::all_of(rep.checks.begin(), rep.checks.end(),
                         [](const CheckResult& c) { return !c.required || c.pass; });
    return rep;
}

MatchingCertificate transform_certificate(const MatchingCertificate& cert,
                                          const EichlerSpec& spec) {
    const IMat iso = spec.to_matrix();
    MatchingCertificate out = cert;
    out.emb1.matrix = iso * cert.emb1.matrix;
    out.emb2.matrix = iso * cert.emb2.matrix;
    auto map_vec = [&](const LatticeVector& v) { return spec.apply(v); };
    out.kappa1 = map_vec(cert.kappa1);
    out.kappa2 = map_vec(cert.kappa2);
    out.kappaK = map_vec(cert.kappaK);
    return out;
}

json certificate_to_json(const MatchingCertificate& cert) {
    json j;
    j["fano1"] = cert.fano1;
    j["fano2"] = cert.fano2;
    j["ambient"] = cert.emb1.target->label;
    auto images = [](const Embedding& e) {
        json rows = json::array();
        for (const auto& v : e.image_vectors()) rows.push_back(v.coords);
        return rows;
    };
    j["emb1_images"] = images(cert.emb1);
    j["emb2_images"] = images(cert.emb2);
    j["kappa1"] = cert.kappa1.coords;
    j["kappa2"] = cert.kappa2.coords;
    j["kappaK"] = cert.kappaK.coords;
    j["span_rank"] = cert.span_rank;
    j["squares"] = {{"kappa1", cert.kappa1_square},
                    {"kappa2", cert.kappa2_square},
                    {"kappaK", cert.kappaK_square}};
    auto rat = [](const BigRat& r) {
        json q;
        q["num"] = to_int_checked(boost::multiprecision::numerator(r), "ratio numerator");
        q["den"] = to_int_checked(boost::multiprecision::denominator(r), "ratio denominator");
        return q;
    };
    j["scaling_ratios"] = {{"lambda1_sq", rat(cert.lambda1_sq)},
                           {"lambda2_sq", rat(cert.lambda2_sq)}};
    j["strict_orthogonality"] = cert.strict_orthogonality;
    json checks = json::array();
    for (const auto& c : cert.checks) {
        json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        cj["required"] = c.required;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    j["caveat"] = cert.caveat;
    return j;
}

MatchingCertificate certificate_from_json(const json& j, const PolarizedFanoClass& rec1,
                                          const PolarizedFanoClass& rec2) {
    MatchingCertificate cert;
    cert.fano1 = j.at("fano1").get<std::string>();
    cert.fano2 = j.at("fano2").get<std::string>();
    auto target = k3();
    if (j.value("ambient", "K3") != target->label)
        throw validation_error("certificate ambient lattice must be K3");

    auto read_emb = [&](const json& rows, const PolarizedFanoClass& rec) {
        IMat m(target->rank(), rows.size());
        for (std::size_t c = 0; c < rows.size(); ++c) {
            auto v = rows[c].get<std::vector<Int>>();
            if (v.size() != target->rank())
                throw validation_error("embedding image row has wrong length");
            for (std::size_t i = 0; i < target->rank(); ++i) m(i, c) = v[i];
        }
        return Embedding{rec.polarization, target, std::move(m)};
    };
    cert.emb1 = read_emb(j.at("emb1_images"), rec1);
    cert.emb2 = read_emb(j.at("emb2_images"), rec2);

    auto read_vec = [&](const json& v) {
        return make_vector(target, v.get<std::vector<Int>>());
    };
    cert.kappa1 = read_vec(j.at("kappa1"));
    cert.kappa2 = read_vec(j.at("kappa2"));
    cert.kappaK = read_vec(j.at("kappaK"));
    cert.span_rank = j.at("span_rank").get<Int>();
    cert.kappa1_square = j.at("squares").at("kappa1").get<Int>();
    cert.kappa2_square = j.at("squares").at("kappa2").get<Int>();
    cert.kappaK_square = j.at("squares").at("kappaK").get<Int>();
    auto rat = [](const json& q) {
        return BigRat(BigInt(q.at("num").get<Int>()), BigInt(q.at("den").get<Int>()));
    };
    cert.lambda1_sq = rat(j.at("scaling_ratios").at("lambda1_sq"));
    cert.lambda2_sq = rat(j.at("scaling_ratios").at("lambda2_sq"));
    cert.strict_orthogonality = j.at("strict_orthogonality").get<bool>();
    if (j.contains("checks"))
        for (const auto& cj : j.at("checks"))
            cert.checks.push_back(CheckResult{cj.at("name").get<std::string>(),
                                              cj.at("pass").get<bool>(),
                                              cj.value("required", true),
                                              cj.value("detail", "")});
    cert.caveat = j.value("caveat", "");
    return cert;
}

}  // namespace tcs
