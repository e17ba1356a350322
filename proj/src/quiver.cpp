#include "defmut/quiver.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace defmut {

namespace {

long positive_part(long x) { return x > 0 ? x : 0; }
long sign(long x) { return (x > 0) - (x < 0); }

}  // namespace

ExchangeMatrix::ExchangeMatrix(int n_mutable, int n_frozen, std::vector<std::vector<long>> rows)
    : n_mutable_(n_mutable), n_frozen_(n_frozen), rows_(std::move(rows)) {
    if (n_mutable < 0 || n_frozen < 0) throw Error("exchange matrix: negative dimension");
    if (static_cast<int>(rows_.size()) != n_mutable + n_frozen)
        throw Error("exchange matrix: expected " + std::to_string(n_mutable + n_frozen) + " rows");
    for (const auto& r : rows_)
        if (static_cast<int>(r.size()) != n_mutable)
            throw Error("exchange matrix: each row needs " + std::to_string(n_mutable) + " entries");
    if (!is_skew_symmetric()) throw Error("exchange matrix: mutable block is not skew-symmetric");
}

ExchangeMatrix ExchangeMatrix::square(std::vector<std::vector<long>> rows) {
    int n = static_cast<int>(rows.size());
    return ExchangeMatrix(n, 0, std::move(rows));
}

bool ExchangeMatrix::is_skew_symmetric() const {
    for (int i = 0; i < n_mutable_; ++i)
        for (int j = 0; j < n_mutable_; ++j)
            if (at(i, j) != -at(j, i)) return false;
    return true;
}

ExchangeMatrix ExchangeMatrix::mutable_block() const {
    return ExchangeMatrix(n_mutable_, 0, {rows_.begin(), rows_.begin() + n_mutable_});
}

ZMatrix ExchangeMatrix::mutable_block_integer() const {
    ZMatrix out;
    for (int i = 0; i < n_mutable_; ++i) {
        ZVector r;
        for (int j = 0; j < n_mutable_; ++j) r.emplace_back(at(i, j));
        out.push_back(std::move(r));
    }
    return out;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int x : images_) {
        if (x < 1 || x > size() || seen[static_cast<std::size_t>(x - 1)])
            throw Error("permutation: images must be a bijection of 1..n");
        seen[static_cast<std::size_t>(x - 1)] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) inv[static_cast<std::size_t>(images_[i] - 1)] = static_cast<int>(i) + 1;
    return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
        if (images_[i] != static_cast<int>(i) + 1) return false;
    return true;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw Error("permutation sizes differ");
    std::vector<int> out;
    for (int i = 1; i <= b.size(); ++i) out.push_back(a(b(i)));
    return Permutation(std::move(out));
}

void MutationWord::validate(int n_mutable) const {
    for (int k : indices)
        if (k < 1 || k > n_mutable)
            throw Error("mutation word: node " + std::to_string(k) + " is not a mutable node (1.." +
                        std::to_string(n_mutable) + ")");
    if (permutation && permutation->size() != n_mutable)
        throw Error("mutation word: permutation acts on " + std::to_string(permutation->size()) +
                    " nodes, expected " + std::to_string(n_mutable));
}

std::vector<int> parse_indices(const std::string& text) {
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<int> out;
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw ParseError("");
            out.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("invalid index '" + tok + "'");
        }
    }
    return out;
}

ExchangeMatrix mutate_matrix(const ExchangeMatrix& b, int k) {
    if (k < 1 || k > b.n_mutable())
        throw Error("mutate_matrix: node " + std::to_string(k) + " out of range 1.." + std::to_string(b.n_mutable()));
    int kk = k - 1;
    std::vector<std::vector<long>> out = b.entries();
    for (int i = 0; i < b.rows(); ++i) {
        for (int j = 0; j < b.n_mutable(); ++j) {
            long& x = out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (i == kk || j == kk) {
                x = -b.at(i, j);
            } else {
                x = b.at(i, j) + sign(b.at(i, kk)) * positive_part(b.at(i, kk) * b.at(kk, j));
            }
        }
    }
    return ExchangeMatrix(b.n_mutable(), b.n_frozen(), std::move(out));
}

ExchangeMatrix apply_permutation(const ExchangeMatrix& b, const Permutation& rho) {
    if (rho.size() != b.n_mutable()) throw Error("apply_permutation: size mismatch");
    std::vector<std::vector<long>> out = b.entries();
    for (int i = 0; i < b.rows(); ++i) {
        int src_row = i < b.n_mutable() ? rho(i + 1) - 1 : i;
        for (int j = 0; j < b.n_mutable(); ++j)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = b.at(src_row, rho(j + 1) - 1);
    }
    return ExchangeMatrix(b.n_mutable(), b.n_frozen(), std::move(out));
}

ExchangeMatrix apply_word(const ExchangeMatrix& b, const MutationWord& w) {
    w.validate(b.n_mutable());
    ExchangeMatrix m = b;
    for (int k : w.indices) m = mutate_matrix(m, k);
    if (w.permutation) m = apply_permutation(m, w.permutation->inverse());
    return m;
}

WordInvariance check_word_invariance(const ExchangeMatrix& b, const MutationWord& w) {
    ExchangeMatrix f = apply_word(b, w);
    return {f == b, f};
}

std::optional<Permutation> find_permutation(const ExchangeMatrix& b, const ExchangeMatrix& target) {
    int n = b.n_mutable();
    if (n > 8) throw Error("find_permutation: search is limited to 8 mutable nodes");
    if (target.n_mutable() != n || target.n_frozen() != b.n_frozen()) return std::nullopt;
    std::vector<int> images(static_cast<std::size_t>(n));
    std::iota(images.begin(), images.end(), 1);
    do {
        Permutation rho(images);
        if (apply_permutation(b, rho) == target) return rho;
    } while (std::next_permutation(images.begin(), images.end()));
    return std::nullopt;
}

KernelImage integer_kernel_image(const ExchangeMatrix& b) {
    ZMatrix block = b.mutable_block_integer();
    KernelImage out;
    out.kernel = integer_kernel(block, b.n_mutable());
    ZMatrix columns;
    for (int j = 0; j < b.n_mutable(); ++j) {
        ZVector c;
        for (int i = 0; i < b.n_mutable(); ++i) c.emplace_back(b.at(i, j));
        columns.push_back(std::move(c));
    }
    out.image = hermite_basis(std::move(columns));
    return out;
}

std::string export_dot(const ExchangeMatrix& b, const std::vector<std::string>& labels) {
    auto label = [&](int i) {
        if (static_cast<std::size_t>(i) < labels.size()) return labels[static_cast<std::size_t>(i)];
        return i < b.n_mutable() ? std::to_string(i + 1) : "f" + std::to_string(i - b.n_mutable() + 1);
    };
    std::ostringstream out;
    out << "digraph quiver {\n";
    for (int i = 0; i < b.rows(); ++i) {
        out << "  n" << i << " [label=\"" << label(i) << "\"";
        if (i >= b.n_mutable()) out << ", shape=box";
        out << "];\n";
    }
    auto edge = [&](int from, int to, long mult) {
        out << "  n" << from << " -> n" << to;
        if (mult > 1) out << " [label=\"" << mult << "\"]";
        out << ";\n";
    };
    for (int i = 0; i < b.n_mutable(); ++i)
        for (int j = i + 1; j < b.n_mutable(); ++j) {
            if (b.at(i, j) > 0) edge(i, j, b.at(i, j));
            if (b.at(i, j) < 0) edge(j, i, -b.at(i, j));
        }
    for (int f = b.n_mutable(); f < b.rows(); ++f)
        for (int j = 0; j < b.n_mutable(); ++j) {
            if (b.at(f, j) > 0) edge(f, j, b.at(f, j));
            if (b.at(f, j) < 0) edge(j, f, -b.at(f, j));
        }
    out << "}\n";
    return out.str();
}

}  // namespace defmut
