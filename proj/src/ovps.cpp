#include "ovc/ovps.hpp"

#include <cmath>
#include <mutex>
#include <random>

#include "ovc/errors.hpp"

namespace ovc {

struct MultiMap::Node {
  enum class Kind { Identity, Constant, Generator, Compose, Linear, Tabulated };
  Kind kind;
  int arity = 0;
  int d = 1;
  std::string name;
  Mat value;
  std::function<Mat(std::span<const Mat>)> fn;
  MultiMap alpha;
  std::vector<MultiMap> betas;
  std::vector<std::pair<Complex, MultiMap>> terms;
  std::shared_ptr<const Tensor> table;
};

using Kind = MultiMap::Node::Kind;

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

constexpr std::size_t kMaxTableEntries = std::size_t{1} << 24;

}  // namespace

// ---------------------------------------------------------------------------
// matrices

Mat random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

Mat random_hermitian(int n, std::uint64_t seed) {
  Mat g = random_matrix(n, n, seed);
  return (g + g.adjoint()) / 2.0;
}

Vec vectorize(const Mat& b) {
  Vec v(b.rows() * b.cols());
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) v(i * b.cols() + j) = b(i, j);
  return v;
}

Mat unvectorize(const Vec& v, int d) {
  Mat b(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b(i, j) = v(i * d + j);
  return b;
}

Mat elementary(int d, int index) {
  Mat e = Mat::Zero(d, d);
  e(index / d, index % d) = 1.0;
  return e;
}

// ---------------------------------------------------------------------------
// tensors

Mat Tensor::evaluate(std::span<const Mat> args) const {
  if (static_cast<int>(args.size()) != arity) throw ArityMismatch("tensor evaluated on wrong number of arguments");
  const std::size_t D = dim();
  std::vector<Complex> cur = data;
  std::size_t rest = ipow(D, arity);
  for (const auto& b : args) {
    Vec v = vectorize(b);
    rest /= D;
    std::vector<Complex> next(D * rest, Complex(0));
    for (std::size_t o = 0; o < D; ++o)
      for (std::size_t t = 0; t < D; ++t) {
        const Complex w = v(static_cast<Eigen::Index>(t));
        if (w == Complex(0)) continue;
        const Complex* src = &cur[(o * D + t) * rest];
        Complex* dst = &next[o * rest];
        for (std::size_t r = 0; r < rest; ++r) dst[r] += w * src[r];
      }
    cur.swap(next);
  }
  Vec out(static_cast<Eigen::Index>(D));
  for (std::size_t o = 0; o < D; ++o) out(static_cast<Eigen::Index>(o)) = cur[o];
  return unvectorize(out, d);
}

namespace {

// alpha with beta contracted into input slot (1-based).
Tensor contract(const Tensor& alpha, int slot, const Tensor& beta) {
  const std::size_t D = alpha.dim();
  const std::size_t P = D * ipow(D, slot - 1);
  const std::size_t Q = ipow(D, alpha.arity - slot);
  const std::size_t M = ipow(D, beta.arity);
  if (P * M * Q > kMaxTableEntries) throw ResourceLimit("tensor too large to contract");
  Tensor out{alpha.d, alpha.arity - 1 + beta.arity, std::vector<Complex>(P * M * Q)};
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> B(beta.data.data(), static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(M));
  for (std::size_t p = 0; p < P; ++p) {
    Eigen::Map<const RowMat> A(alpha.data.data() + p * D * Q, static_cast<Eigen::Index>(D),
                               static_cast<Eigen::Index>(Q));
    Eigen::Map<RowMat> R(out.data.data() + p * M * Q, static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(Q));
    R.noalias() = B.transpose() * A;
  }
  return out;
}

Tensor identity_tensor(int d) {
  const std::size_t D = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  Tensor t{d, 1, std::vector<Complex>(D * D)};
  for (std::size_t i = 0; i < D; ++i) t.data[i * D + i] = 1.0;
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// multimaps

MultiMap MultiMap::identity(int d) {
  static std::mutex mu;
  static std::map<int, MultiMap> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Identity;
  n->arity = 1;
  n->d = d;
  n->name = "id";
  return cache.emplace(d, MultiMap(n)).first->second;
}

MultiMap MultiMap::constant(const Mat& value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->arity = 0;
  n->d = static_cast<int>(value.rows());
  n->value = value;
  n->name = "const";
  return MultiMap(n);
}

MultiMap MultiMap::generator(int arity, int d, std::function<Mat(std::span<const Mat>)> fn, std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Generator;
  n->arity = arity;
  n->d = d;
  n->fn = std::move(fn);
  n->name = std::move(name);
  return MultiMap(n);
}

MultiMap MultiMap::product(int d) {
  static std::mutex mu;
  static std::map<int, MultiMap> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  auto m = generator(2, d, [](std::span<const Mat> a) -> Mat { return a[0] * a[1]; }, "mul");
  return cache.emplace(d, m).first->second;
}

MultiMap MultiMap::zero(int arity, int d) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Linear;
  n->arity = arity;
  n->d = d;
  n->name = "0";
  return MultiMap(n);
}

MultiMap MultiMap::linear(int arity, int d, std::vector<std::pair<Complex, MultiMap>> terms) {
  std::vector<std::pair<Complex, MultiMap>> kept;
  for (auto& [c, f] : terms) {
    if (f.arity() != arity || f.dim() != d) throw ArityMismatch("linear combination of maps with different shapes");
    if (c == Complex(0) || f.is_zero()) continue;
    kept.emplace_back(c, std::move(f));
  }
  if (kept.empty()) return zero(arity, d);
  if (kept.size() == 1 && kept[0].first == Complex(1)) return kept[0].second;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Linear;
  n->arity = arity;
  n->d = d;
  n->terms = std::move(kept);
  n->name = "lin";
  return MultiMap(n);
}

MultiMap MultiMap::from_tensor(Tensor t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tabulated;
  n->arity = t.arity;
  n->d = t.d;
  n->name = "table";
  n->table = std::make_shared<const Tensor>(std::move(t));
  return MultiMap(n);
}

int MultiMap::arity() const {
  if (!node_) throw Error("use of an empty MultiMap");
  return node_->arity;
}
int MultiMap::dim() const {
  if (!node_) throw Error("use of an empty MultiMap");
  return node_->d;
}
bool MultiMap::is_identity() const { return node_ && node_->kind == Kind::Identity; }
bool MultiMap::is_zero() const { return node_ && node_->kind == Kind::Linear && node_->terms.empty(); }
std::string MultiMap::name() const { return node_ ? node_->name : "<empty>"; }

Mat MultiMap::operator()(std::span<const Mat> args) const {
  const Node& n = *node_;
  if (static_cast<int>(args.size()) != n.arity) {
    throw ArityMismatch("map '" + n.name + "' of arity " + std::to_string(n.arity) + " applied to " +
                        std::to_string(args.size()) + " arguments");
  }
  switch (n.kind) {
    case Kind::Identity:
      return args[0];
    case Kind::Constant:
      return n.value;
    case Kind::Generator:
      return n.fn(args);
    case Kind::Tabulated:
      return n.table->evaluate(args);
    case Kind::Linear: {
      Mat out = Mat::Zero(n.d, n.d);
      for (const auto& [c, f] : n.terms) out += c * f(args);
      return out;
    }
    case Kind::Compose: {
      std::vector<Mat> inner;
      inner.reserve(n.betas.size());
      std::size_t pos = 0;
      for (const auto& b : n.betas) {
        auto m = static_cast<std::size_t>(b.arity());
        inner.push_back(b.is_identity() ? args[pos] : b(args.subspan(pos, m)));
        pos += m;
      }
      return n.alpha(std::span<const Mat>(inner));
    }
  }
  throw Error("unreachable");
}

MultiMap multimap_compose(const MultiMap& alpha, const std::vector<MultiMap>& betas) {
  if (static_cast<int>(betas.size()) != alpha.arity()) {
    throw ArityMismatch("compose: " + std::to_string(betas.size()) + " maps for arity " +
                        std::to_string(alpha.arity()));
  }
  int arity = 0;
  bool all_identity = true;
  bool any_zero = alpha.is_zero();
  for (const auto& b : betas) {
    if (b.dim() != alpha.dim()) throw ArityMismatch("compose: maps over different algebras");
    arity += b.arity();
    all_identity = all_identity && b.is_identity();
    any_zero = any_zero || b.is_zero();
  }
  if (any_zero) return MultiMap::zero(arity, alpha.dim());
  if (all_identity) return alpha;
  if (alpha.is_identity()) return betas[0];
  auto n = std::make_shared<MultiMap::Node>();
  n->kind = Kind::Compose;
  n->arity = arity;
  n->d = alpha.dim();
  n->alpha = alpha;
  n->betas = betas;
  n->name = "(" + alpha.name() + ")o(...)";
  return MultiMap(std::shared_ptr<const MultiMap::Node>(n));
}

MultiMap multimap_partial(const MultiMap& alpha, int slot, const MultiMap& beta) {
  if (slot < 1 || slot > alpha.arity()) {
    throw ArityMismatch("partial composition slot " + std::to_string(slot) + " outside [1, " +
                        std::to_string(alpha.arity()) + "]");
  }
  std::vector<MultiMap> betas(static_cast<std::size_t>(alpha.arity()), MultiMap::identity(alpha.dim()));
  betas[static_cast<std::size_t>(slot - 1)] = beta;
  return multimap_compose(alpha, betas);
}

MultiMap operator+(const MultiMap& a, const MultiMap& b) {
  return MultiMap::linear(a.arity(), a.dim(), {{1.0, a}, {1.0, b}});
}
MultiMap operator-(const MultiMap& a, const MultiMap& b) {
  return MultiMap::linear(a.arity(), a.dim(), {{1.0, a}, {-1.0, b}});
}
MultiMap operator*(Complex c, const MultiMap& a) { return MultiMap::linear(a.arity(), a.dim(), {{c, a}}); }

Tensor tabulate_tensor(const MultiMap& f) {
  const MultiMap::Node& n = *f.node_;
  const std::size_t D = static_cast<std::size_t>(n.d) * static_cast<std::size_t>(n.d);
  const std::size_t cols = ipow(D, n.arity);
  if (D * cols > kMaxTableEntries) throw ResourceLimit("map too large to tabulate");
  switch (n.kind) {
    case Kind::Tabulated:
      return *n.table;
    case Kind::Identity:
      return identity_tensor(n.d);
    case Kind::Constant: {
      Tensor t{n.d, 0, std::vector<Complex>(D)};
      Vec v = vectorize(n.value);
      for (std::size_t i = 0; i < D; ++i) t.data[i] = v(static_cast<Eigen::Index>(i));
      return t;
    }
    case Kind::Linear: {
      Tensor t{n.d, n.arity, std::vector<Complex>(D * cols)};
      for (const auto& [c, g] : n.terms) {
        Tensor part = tabulate_tensor(g);
        for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] += c * part.data[i];
      }
      return t;
    }
    case Kind::Compose: {
      Tensor t = tabulate_tensor(n.alpha);
      for (std::size_t j = n.betas.size(); j-- > 0;) {
        if (n.betas[j].is_identity()) continue;
        t = contract(t, static_cast<int>(j) + 1, tabulate_tensor(n.betas[j]));
      }
      return t;
    }
    case Kind::Generator: {
      Tensor t{n.d, n.arity, std::vector<Complex>(D * cols)};
      std::vector<Mat> args(static_cast<std::size_t>(n.arity));
      std::vector<std::size_t> idx(static_cast<std::size_t>(n.arity), 0);
      for (std::size_t c = 0; c < cols; ++c) {
        std::size_t rem = c;
        for (int j = n.arity - 1; j >= 0; --j) {
          idx[static_cast<std::size_t>(j)] = rem % D;
          rem /= D;
        }
        for (int j = 0; j < n.arity; ++j)
          args[static_cast<std::size_t>(j)] = elementary(n.d, static_cast<int>(idx[static_cast<std::size_t>(j)]));
        Vec v = vectorize(n.fn(std::span<const Mat>(args)));
        for (std::size_t o = 0; o < D; ++o) t.data[o * cols + c] = v(static_cast<Eigen::Index>(o));
      }
      return t;
    }
  }
  throw Error("unreachable");
}

MultiMap tabulate(const MultiMap& f) {
  if (f.node()->kind == Kind::Tabulated || f.is_identity()) return f;
  return MultiMap::from_tensor(tabulate_tensor(f));
}

MultiMap random_multimap(int arity, int d, std::uint64_t seed) {
  Tensor t;
  t.d = d;
  t.arity = arity;
  t.data.resize(ipow(t.dim(), arity + 1));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5) / d);
  for (auto& x : t.data) x = Complex(g(rng), g(rng));
  return MultiMap::from_tensor(std::move(t));
}

// ---------------------------------------------------------------------------
// comparison

Deviation compare_evaluators(int d, int inputs, const std::function<Vec(std::span<const Mat>)>& f,
                             const std::function<Vec(std::span<const Mat>)>& g, std::uint64_t seed) {
  const std::size_t D = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  double abs = 0, scale = 0;
  auto compare = [&](std::span<const Mat> args) {
    Vec a = f(args), b = g(args);
    if (a.size() != b.size()) throw ArityMismatch("compared maps have different output shapes");
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      abs = std::max(abs, std::abs(a(i) - b(i)));
      scale = std::max({scale, std::abs(a(i)), std::abs(b(i))});
    }
  };
  std::vector<Mat> args(static_cast<std::size_t>(inputs));
  bool exhaustive = true;
  std::size_t total = 1;
  for (int i = 0; i < inputs && exhaustive; ++i) {
    total *= D;
    if (total > 4096) exhaustive = false;
  }
  if (exhaustive) {
    for (std::size_t c = 0; c < total; ++c) {
      std::size_t rem = c;
      for (int j = inputs - 1; j >= 0; --j) {
        args[static_cast<std::size_t>(j)] = elementary(d, static_cast<int>(rem % D));
        rem /= D;
      }
      compare(args);
    }
  } else {
    for (int probe = 0; probe < 20; ++probe) {
      for (int j = 0; j < inputs; ++j) {
        args[static_cast<std::size_t>(j)] =
            random_matrix(d, d, seed * 1000003ULL + static_cast<std::uint64_t>(probe) * 131ULL + static_cast<std::uint64_t>(j));
      }
      compare(args);
    }
  }
  return {abs, abs / std::max(scale, 1e-12), scale};
}

Deviation multimap_deviation(const MultiMap& f, const MultiMap& g, std::uint64_t seed) {
  if (f.arity() != g.arity()) throw ArityMismatch("compared maps have different arities");
  if (f.dim() != g.dim()) throw ArityMismatch("compared maps act on different algebras");
  const std::size_t D = static_cast<std::size_t>(f.dim()) * static_cast<std::size_t>(f.dim());
  if (ipow(D, f.arity() + 1) <= (std::size_t{1} << 20)) {
    // the full table is the evaluation on every tuple of matrix units
    Tensor a = tabulate_tensor(f), b = tabulate_tensor(g);
    double abs = 0, scale = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
      abs = std::max(abs, std::abs(a.data[i] - b.data[i]));
      scale = std::max({scale, std::abs(a.data[i]), std::abs(b.data[i])});
    }
    return {abs, abs / std::max(scale, 1e-12), scale};
  }
  auto ev = [](const MultiMap& m) {
    return [&m](std::span<const Mat> a) { return vectorize(m(a)); };
  };
  return compare_evaluators(f.dim(), f.arity(), ev(f), ev(g), seed);
}

bool multimap_eq(const MultiMap& f, const MultiMap& g, double tol) {
  return multimap_deviation(f, g).within(tol);
}

Deviation multilinearity_deviation(const MultiMap& f, std::uint64_t seed) {
  Deviation worst;
  const int d = f.dim();
  for (int s = 0; s < f.arity(); ++s) {
    std::vector<Mat> args;
    for (int j = 0; j < f.arity(); ++j) args.push_back(random_matrix(d, d, seed + 17 * static_cast<std::uint64_t>(j)));
    Mat x = random_matrix(d, d, seed + 1001), y = random_matrix(d, d, seed + 1002);
    Complex al(0.7, -0.3), be(-1.1, 0.4);
    auto at = [&](const Mat& v) {
      args[static_cast<std::size_t>(s)] = v;
      return f(args);
    };
    Mat lhs = at(al * x + be * y);
    Mat rhs = al * at(x) + be * at(y);
    double abs = (lhs - rhs).cwiseAbs().maxCoeff();
    double scale = std::max(lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff());
    worst.merge({abs, abs / std::max(scale, 1e-12), scale});
  }
  return worst;
}

// ---------------------------------------------------------------------------
// words of maps

int word_inputs(const MultiMapWord& w) {
  int n = 0;
  for (const auto& f : w) n += f.arity();
  return n;
}

MultiMapWord vcompose_maps(const MultiMapWord& x, const MultiMapWord& y) {
  if (word_inputs(x) != static_cast<int>(y.size())) {
    throw ArityMismatch("vcompose_maps: " + std::to_string(word_inputs(x)) + " inputs against " +
                        std::to_string(y.size()) + " outputs");
  }
  MultiMapWord out;
  std::size_t pos = 0;
  for (const auto& f : x) {
    auto n = static_cast<std::size_t>(f.arity());
    std::vector<MultiMap> group(y.begin() + static_cast<std::ptrdiff_t>(pos), y.begin() + static_cast<std::ptrdiff_t>(pos + n));
    out.push_back(multimap_compose(f, group));
    pos += n;
  }
  return out;
}

MapSum MapSum::of(const MultiMapWord& w, Complex c) {
  int d = w.empty() ? 1 : w.front().dim();
  MapSum s(d, static_cast<int>(w.size()), word_inputs(w));
  s.add(w, c);
  return s;
}

MapSum MapSum::identity(int d, int n) {
  MapSum s(d, n, n);
  s.add(MultiMapWord(static_cast<std::size_t>(n), MultiMap::identity(d)), 1.0);
  return s;
}

void MapSum::add(const MultiMapWord& w, Complex c) {
  if (static_cast<int>(w.size()) != outputs_ || word_inputs(w) != inputs_) {
    throw ArityMismatch("MapSum term with grading (" + std::to_string(word_inputs(w)) + "," +
                        std::to_string(w.size()) + "), expected (" + std::to_string(inputs_) + "," +
                        std::to_string(outputs_) + ")");
  }
  if (c == Complex(0)) return;
  for (const auto& f : w)
    if (f.is_zero()) return;
  for (auto& t : terms_) {
    bool same = true;
    for (std::size_t i = 0; i < w.size() && same; ++i) same = same_node(t.maps[i], w[i]);
    if (same) {
      t.coeff += c;
      return;
    }
  }
  terms_.push_back({c, w});
}

void MapSum::add(const MapSum& other, Complex c) {
  if (terms_.empty() && outputs_ == 0 && inputs_ == 0 && other.outputs_ + other.inputs_ > 0) {
    d_ = other.d_;
    outputs_ = other.outputs_;
    inputs_ = other.inputs_;
  }
  for (const auto& t : other.terms_) add(t.maps, c * t.coeff);
}

MapSum MapSum::scaled(Complex c) const {
  MapSum s(d_, outputs_, inputs_);
  s.add(*this, c);
  return s;
}

MultiMap MapSum::collapse() const {
  if (outputs_ != 1) throw ArityMismatch("collapse needs a single output");
  std::vector<std::pair<Complex, MultiMap>> parts;
  for (const auto& t : terms_) parts.emplace_back(t.coeff, t.maps[0]);
  return MultiMap::linear(inputs_, d_, std::move(parts));
}

MapSum MapSum::normalized() const {
  if (outputs_ != 1 || terms_.size() <= 1) return *this;
  MapSum s(d_, 1, inputs_);
  s.add(MultiMapWord{collapse()}, 1.0);
  return s;
}

Vec MapSum::evaluate(std::span<const Mat> args) const {
  if (static_cast<int>(args.size()) != inputs_) throw ArityMismatch("MapSum evaluated on wrong number of arguments");
  const std::size_t D = static_cast<std::size_t>(d_) * static_cast<std::size_t>(d_);
  Vec out = Vec::Zero(static_cast<Eigen::Index>(ipow(D, outputs_)));
  for (const auto& t : terms_) {
    Vec acc = Vec::Ones(1);
    std::size_t pos = 0;
    for (const auto& f : t.maps) {
      auto n = static_cast<std::size_t>(f.arity());
      Vec v = vectorize(f.is_identity() ? args[pos] : f(args.subspan(pos, n)));
      pos += n;
      Vec next(acc.size() * v.size());
      for (Eigen::Index i = 0; i < acc.size(); ++i) next.segment(i * v.size(), v.size()) = acc(i) * v;
      acc.swap(next);
    }
    out += t.coeff * acc;
  }
  return out;
}

std::optional<Mat> MapSum::dense(std::size_t max_entries) const {
  const std::size_t D = static_cast<std::size_t>(d_) * static_cast<std::size_t>(d_);
  const std::size_t rows = ipow(D, outputs_), cols = ipow(D, inputs_);
  if (rows * cols > max_entries) return std::nullopt;
  Mat out = Mat::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::map<const MultiMap::Node*, Mat> tables;
  auto table = [&](const MultiMap& f) -> const Mat& {
    auto it = tables.find(f.node());
    if (it != tables.end()) return it->second;
    Tensor t = tabulate_tensor(f);
    const std::size_t c = ipow(D, f.arity());
    Mat m(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(c));
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t j = 0; j < c; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.data[i * c + j];
    return tables.emplace(f.node(), std::move(m)).first->second;
  };
  for (const auto& t : terms_) {
    Mat acc = Mat::Ones(1, 1);
    for (const auto& f : t.maps) {
      const Mat& m = table(f);
      Mat next(acc.rows() * m.rows(), acc.cols() * m.cols());
      for (Eigen::Index i = 0; i < acc.rows(); ++i)
        for (Eigen::Index j = 0; j < acc.cols(); ++j)
          next.block(i * m.rows(), j * m.cols(), m.rows(), m.cols()) = acc(i, j) * m;
      acc.swap(next);
    }
    out += t.coeff * acc;
  }
  return out;
}

MapSum vcompose(const MapSum& x, const MapSum& y) {
  if (x.inputs() != y.outputs()) {
    throw ArityMismatch("vcompose: " + std::to_string(x.inputs()) + " inputs against " +
                        std::to_string(y.outputs()) + " outputs");
  }
  MapSum out(x.dim(), x.outputs(), y.inputs());
  for (const auto& a : x.terms())
    for (const auto& b : y.terms()) out.add(vcompose_maps(a.maps, b.maps), a.coeff * b.coeff);
  return out.normalized();
}

MapSum tensor(const MapSum& x, const MapSum& y) {
  MapSum out(std::max(x.dim(), y.dim()), x.outputs() + y.outputs(), x.inputs() + y.inputs());
  for (const auto& a : x.terms())
    for (const auto& b : y.terms()) {
      MultiMapWord w = a.maps;
      w.insert(w.end(), b.maps.begin(), b.maps.end());
      out.add(w, a.coeff * b.coeff);
    }
  return out;
}

Deviation mapsum_deviation(const MapSum& a, const MapSum& b, std::uint64_t seed) {
  if (a.inputs() != b.inputs() || a.outputs() != b.outputs()) {
    throw ArityMismatch("compared morphism values have different gradings");
  }
  auto da = a.dense(), db = da ? b.dense() : std::nullopt;
  if (da && db) {
    double abs = (*da - *db).cwiseAbs().maxCoeff();
    double scale = std::max(da->cwiseAbs().maxCoeff(), db->cwiseAbs().maxCoeff());
    return {abs, abs / std::max(scale, 1e-12), scale};
  }
  return compare_evaluators(
      std::max(a.dim(), b.dim()), a.inputs(), [&](std::span<const Mat> x) { return a.evaluate(x); },
      [&](std::span<const Mat> x) { return b.evaluate(x); }, seed);
}

// ---------------------------------------------------------------------------
// spaces

OVMatrixSpace::OVMatrixSpace(int d, int k, std::map<int, Mat> variables) : d_(d), k_(k), vars_(std::move(variables)) {
  if (d < 1 || k < 1) throw DomainError("dimensions must be positive");
  for (const auto& [v, a] : vars_) {
    if (v < 0) throw DomainError("negative variable index");
    if (a.rows() != d * k || a.cols() != d * k) {
      throw DomainError("variable " + std::to_string(v) + " is not " + std::to_string(d * k) + "x" +
                        std::to_string(d * k));
    }
    if (!a.allFinite()) throw DomainError("variable " + std::to_string(v) + " has non-finite entries");
  }
  if (bimodule_deviation() > 1e-12) throw DomainError("conditional expectation fails the bimodule property");
}

OVMatrixSpace OVMatrixSpace::random(int d, int k, int num_vars, std::uint64_t seed) {
  std::map<int, Mat> vars;
  for (int v = 0; v < num_vars; ++v) vars[v] = random_hermitian(d * k, seed * 7919ULL + static_cast<std::uint64_t>(v));
  return OVMatrixSpace(d, k, std::move(vars));
}

const Mat& OVMatrixSpace::variable(int v) const {
  auto it = vars_.find(v);
  if (it == vars_.end()) throw DomainError("unknown variable index " + std::to_string(v));
  return it->second;
}

std::vector<int> OVMatrixSpace::variable_indices() const {
  std::vector<int> out;
  for (const auto& [v, a] : vars_) out.push_back(v);
  return out;
}

Mat OVMatrixSpace::embed(const Mat& b) const {
  if (b.rows() != d_ || b.cols() != d_) throw DomainError("element of B has the wrong size");
  Mat out = Mat::Zero(d_ * k_, d_ * k_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      for (int r = 0; r < k_; ++r) out(i * k_ + r, j * k_ + r) = b(i, j);
  return out;
}

Mat OVMatrixSpace::cond_expect(const Mat& a) const {
  if (a.rows() != d_ * k_ || a.cols() != d_ * k_) throw DomainError("element of A has the wrong size");
  Mat out(d_, d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) out(i, j) = a.block(i * k_, j * k_, k_, k_).trace() / static_cast<double>(k_);
  return out;
}

MultiMap OVMatrixSpace::moment_map(const std::vector<int>& vars) const {
  std::vector<Mat> as;
  std::string name = "E[";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    as.push_back(variable(vars[i]));
    name += (i ? "," : "") + std::to_string(vars[i]);
  }
  name += "]";
  const int n = static_cast<int>(vars.size());
  // the closure keeps its own copy of the space data
  auto self = std::make_shared<const OVMatrixSpace>(*this);
  return MultiMap::generator(n + 1, d_,
                             [self, as](std::span<const Mat> b) -> Mat {
                               Mat acc = self->embed(b[0]);
                               for (std::size_t i = 0; i < as.size(); ++i) acc = acc * as[i] * self->embed(b[i + 1]);
                               return self->cond_expect(acc);
                             },
                             name);
}

double OVMatrixSpace::bimodule_deviation(std::uint64_t seed) const {
  double worst = 0;
  Mat one = Mat::Identity(d_, d_);
  auto rel = [](const Mat& x, const Mat& y) {
    double scale = std::max({x.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff(), 1e-300});
    return (x - y).cwiseAbs().maxCoeff() / std::max(scale, 1e-12);
  };
  worst = std::max(worst, rel(cond_expect(Mat::Identity(d_ * k_, d_ * k_)), one));
  for (int s = 0; s < 3; ++s) {
    Mat a = random_matrix(d_ * k_, d_ * k_, seed + 100 + static_cast<std::uint64_t>(s));
    Mat b1 = random_matrix(d_, d_, seed + 200 + static_cast<std::uint64_t>(s));
    Mat b2 = random_matrix(d_, d_, seed + 300 + static_cast<std::uint64_t>(s));
    worst = std::max(worst, rel(cond_expect(embed(b1) * a * embed(b2)), b1 * cond_expect(a) * b2));
  }
  return worst;
}

}  // namespace ovc
