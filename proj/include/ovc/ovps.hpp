#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ovc {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Seeded complex Gaussian matrix (entries of unit variance).
Mat random_matrix(int rows, int cols, std::uint64_t seed);
/// Seeded Hermitian matrix with O(1) entries.
Mat random_hermitian(int n, std::uint64_t seed);

/// Row-major flattening b(i, j) -> i * d + j.
Vec vectorize(const Mat& b);
Mat unvectorize(const Vec& v, int d);
Mat elementary(int d, int index);

/// A multilinear map B^{⊗n} -> B stored densely: entry [out][in_1]...[in_n]
/// with each index running over the d*d matrix units.
struct Tensor {
  int d = 1;
  int arity = 0;
  std::vector<Complex> data;

  std::size_t dim() const { return static_cast<std::size_t>(d) * static_cast<std::size_t>(d); }
  Mat evaluate(std::span<const Mat> args) const;
};

/// Result of comparing two maps: largest absolute entry difference, that
/// difference relative to the largest entry seen on either side, and the
/// largest entry itself. After merging, rel is the worst per-map ratio while
/// normwise() divides the worst difference by the largest entry overall, which
/// stays meaningful when some compared values are exactly zero.
struct Deviation {
  double abs = 0;
  double rel = 0;
  double scale = 0;
  bool within(double tol) const { return rel <= tol || abs <= 1e-12; }
  double normwise() const { return scale > 0 ? abs / scale : abs; }
  void merge(const Deviation& o) {
    abs = std::max(abs, o.abs);
    rel = std::max(rel, o.rel);
    scale = std::max(scale, o.scale);
  }
};

/// An evaluatable multilinear map B^{⊗n} -> B, built as a DAG of generators,
/// compositions and linear combinations. Arity 0 is allowed internally for
/// constants.
class MultiMap {
 public:
  struct Node;

  MultiMap() = default;

  static MultiMap identity(int d);
  static MultiMap constant(const Mat& value);
  static MultiMap generator(int arity, int d, std::function<Mat(std::span<const Mat>)> fn,
                            std::string name);
  /// (x, y) -> x y
  static MultiMap product(int d);
  static MultiMap zero(int arity, int d);
  static MultiMap linear(int arity, int d, std::vector<std::pair<Complex, MultiMap>> terms);
  static MultiMap from_tensor(Tensor t);

  int arity() const;
  int dim() const;
  bool valid() const { return static_cast<bool>(node_); }
  bool is_identity() const;
  bool is_zero() const;
  std::string name() const;

  Mat operator()(std::span<const Mat> args) const;
  Mat operator()(const std::vector<Mat>& args) const { return (*this)(std::span<const Mat>(args)); }

  const Node* node() const { return node_.get(); }
  friend bool same_node(const MultiMap& a, const MultiMap& b) { return a.node_ == b.node_; }

  friend MultiMap multimap_compose(const MultiMap& alpha, const std::vector<MultiMap>& betas);
  friend Tensor tabulate_tensor(const MultiMap& f);

 private:
  explicit MultiMap(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

MultiMap multimap_compose(const MultiMap& alpha, const std::vector<MultiMap>& betas);
/// alpha with beta plugged into the 1-based slot i.
MultiMap multimap_partial(const MultiMap& alpha, int slot, const MultiMap& beta);
MultiMap operator+(const MultiMap& a, const MultiMap& b);
MultiMap operator-(const MultiMap& a, const MultiMap& b);
MultiMap operator*(Complex c, const MultiMap& a);

/// Dense table of f; composites of tabulated pieces are contracted rather
/// than evaluated. Throws ResourceLimit for tables above 2^24 entries.
Tensor tabulate_tensor(const MultiMap& f);
MultiMap tabulate(const MultiMap& f);
/// A tabulated map with seeded Gaussian entries of variance 1/d^2.
MultiMap random_multimap(int arity, int d, std::uint64_t seed);

/// Compares two families of maps B^{⊗n} -> C^N given as evaluators. Uses
/// every tuple of matrix units when (d^2)^n <= 4096, else 20 seeded probes.
Deviation compare_evaluators(int d, int inputs,
                             const std::function<Vec(std::span<const Mat>)>& f,
                             const std::function<Vec(std::span<const Mat>)>& g,
                             std::uint64_t seed = 0x5eed);
Deviation multimap_deviation(const MultiMap& f, const MultiMap& g, std::uint64_t seed = 0x5eed);
bool multimap_eq(const MultiMap& f, const MultiMap& g, double tol = 1e-9);
/// Largest relative failure of additivity/homogeneity over slots on probes.
Deviation multilinearity_deviation(const MultiMap& f, std::uint64_t seed = 0x5eed);

using MultiMapWord = std::vector<MultiMap>;

int word_inputs(const MultiMapWord& w);
/// Groups y by the arities of x and composes letterwise.
MultiMapWord vcompose_maps(const MultiMapWord& x, const MultiMapWord& y);

/// A linear combination of words of maps sharing the same grading; the value
/// of a morphism on a word. Evaluation returns the flattened element of
/// B^{⊗outputs}.
class MapSum {
 public:
  struct Term {
    Complex coeff;
    MultiMapWord maps;
  };

  MapSum() = default;
  MapSum(int d, int outputs, int inputs) : d_(d), outputs_(outputs), inputs_(inputs) {}
  static MapSum of(const MultiMapWord& w, Complex c = 1);
  static MapSum identity(int d, int n);

  int dim() const { return d_; }
  int outputs() const { return outputs_; }
  int inputs() const { return inputs_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const MultiMapWord& w, Complex c);
  void add(const MapSum& other, Complex c = 1);
  MapSum scaled(Complex c) const;

  /// Single map for one-output sums (zero map when empty).
  MultiMap collapse() const;
  /// Merges everything into one term when outputs() == 1.
  MapSum normalized() const;

  Vec evaluate(std::span<const Mat> args) const;
  /// The whole map as a (d^2)^outputs x (d^2)^inputs matrix over matrix
  /// units; nullopt when that exceeds max_entries.
  std::optional<Mat> dense(std::size_t max_entries = std::size_t{1} << 20) const;

 private:
  int d_ = 1;
  int outputs_ = 0;
  int inputs_ = 0;
  std::vector<Term> terms_;
};

MapSum vcompose(const MapSum& x, const MapSum& y);
MapSum tensor(const MapSum& x, const MapSum& y);
Deviation mapsum_deviation(const MapSum& a, const MapSum& b, std::uint64_t seed = 0x5eed);

/// A = M_d ⊗ M_k over B = M_d (embedded as b ⊗ I_k), E = id ⊗ tr_k / k.
class OVMatrixSpace {
 public:
  OVMatrixSpace(int d, int k, std::map<int, Mat> variables);
  /// num_vars seeded Hermitian variables with indices 0..num_vars-1.
  static OVMatrixSpace random(int d, int k, int num_vars, std::uint64_t seed);

  int d() const { return d_; }
  int k() const { return k_; }
  const std::map<int, Mat>& variables() const { return vars_; }
  const Mat& variable(int v) const;
  std::vector<int> variable_indices() const;

  Mat embed(const Mat& b) const;
  Mat cond_expect(const Mat& a) const;
  /// (b_0, ..., b_n) -> E(b_0 a_{v_1} b_1 ... a_{v_n} b_n)
  MultiMap moment_map(const std::vector<int>& vars) const;

  /// Largest relative violation of E(b a b') = b E(a) b' and E(1) = 1 on
  /// seeded samples.
  double bimodule_deviation(std::uint64_t seed = 1) const;

 private:
  int d_;
  int k_;
  std::map<int, Mat> vars_;
};

}  // namespace ovc
