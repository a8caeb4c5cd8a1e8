#include "ovc/cumulants.hpp"

#include <algorithm>

#include "ovc/errors.hpp"

namespace ovc {

std::string to_string(CumulantKind k) {
  switch (k) {
    case CumulantKind::Moment: return "moment";
    case CumulantKind::Free: return "free";
    case CumulantKind::Boolean: return "boolean";
    case CumulantKind::Monotone: return "monotone";
  }
  return "?";
}

CumulantKind parse_kind(std::string_view s) {
  if (s == "moment") return CumulantKind::Moment;
  if (s == "free") return CumulantKind::Free;
  if (s == "boolean") return CumulantKind::Boolean;
  if (s == "monotone") return CumulantKind::Monotone;
  throw ParseError("unknown cumulant kind '" + std::string(s) + "'");
}

std::vector<int> colors_or_default(const NCPartition& pi) {
  if (pi.colored()) return *pi.colors();
  return std::vector<int>(static_cast<std::size_t>(pi.size()), 0);
}

CumulantFamily CumulantFamily::moments(std::shared_ptr<const OVMatrixSpace> space, int max_order) {
  auto impl = std::make_shared<Impl>();
  impl->kind = CumulantKind::Moment;
  impl->max_order = max_order;
  impl->space = std::move(space);
  return CumulantFamily(impl);
}

CumulantFamily CumulantFamily::derived(const CumulantFamily& moments, CumulantKind kind) {
  if (moments.kind() != CumulantKind::Moment) throw DomainError("cumulants must be built from a moment family");
  auto impl = std::make_shared<Impl>();
  impl->kind = kind;
  impl->max_order = moments.max_order();
  impl->space = moments.impl_->space;
  impl->moments = moments.impl_;
  return CumulantFamily(impl);
}

CumulantFamily build_free(const CumulantFamily& m) { return CumulantFamily::derived(m, CumulantKind::Free); }
CumulantFamily build_boolean(const CumulantFamily& m) { return CumulantFamily::derived(m, CumulantKind::Boolean); }
CumulantFamily build_monotone(const CumulantFamily& m) { return CumulantFamily::derived(m, CumulantKind::Monotone); }

void CumulantFamily::inject_fault(int length, Complex factor) {
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->faults[length] = factor;
}

MultiMap CumulantFamily::generator(const std::vector<int>& word) const {
  if (word.empty()) return MultiMap::identity(impl_->space->d());
  if (static_cast<int>(word.size()) > impl_->max_order) {
    throw MissingEntry("no " + to_string(impl_->kind) + " entry of order " + std::to_string(word.size()) +
                       " (table built to order " + std::to_string(impl_->max_order) + ")");
  }
  for (int v : word) impl_->space->variable(v);
  MultiMap entry;
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->cache.find(word);
    if (it != impl_->cache.end()) entry = it->second;
  }
  if (!entry.valid()) {
    entry = build_entry(word);
    std::lock_guard<std::mutex> lock(impl_->mu);
    entry = impl_->cache.emplace(word, entry).first->second;
  }
  std::lock_guard<std::mutex> lock(impl_->mu);
  auto f = impl_->faults.find(static_cast<int>(word.size()));
  if (f != impl_->faults.end()) return f->second * entry;
  return entry;
}

MultiMap CumulantFamily::build_entry(const std::vector<int>& word) const {
  const auto& space = *impl_->space;
  MultiMap moment = tabulate(space.moment_map(word));
  if (impl_->kind == CumulantKind::Moment) return moment;

  const int n = static_cast<int>(word.size());
  Tensor acc = tabulate_tensor(moment);
  const auto parts = impl_->kind == CumulantKind::Boolean ? enumerate_interval(n) : enumerate_nc(n);
  const NCPartition full = NCPartition::single_block(n);
  for (const auto& p : parts) {
    if (p == full) continue;
    NCPartition colored(p.blocks(), word);
    Tensor t = tabulate_tensor(e_pi_map(colored, *this, Collapse::Leftmost));
    double w = 1.0;
    if (impl_->kind == CumulantKind::Monotone) w = 1.0 / static_cast<double>(tree_factorial(p));
    for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] -= w * t.data[i];
  }
  return MultiMap::from_tensor(std::move(acc));
}

namespace {

struct Collapsed {
  int k = 0, l = 0;  // 1-based positions of the collapsed block
  std::vector<int> word;
  NCPartition rest;
};

Collapsed pick_block(const NCPartition& pi, const std::vector<int>& colors, Collapse order) {
  std::vector<int> candidates;
  for (int i = 0; i < pi.block_count(); ++i) {
    const auto& b = pi.blocks()[static_cast<std::size_t>(i)];
    if (b.back() - b.front() + 1 == static_cast<int>(b.size())) candidates.push_back(i);
  }
  // every non-empty non-crossing partition has an interval block
  int chosen = order == Collapse::Leftmost ? candidates.front() : candidates.back();
  const auto& b = pi.blocks()[static_cast<std::size_t>(chosen)];
  Collapsed c;
  c.k = b.front();
  c.l = b.back();
  c.word.assign(colors.begin() + (c.k - 1), colors.begin() + c.l);
  const int len = c.l - c.k + 1;
  std::vector<Block> rest;
  std::vector<int> rest_colors;
  for (int i = 0; i < pi.block_count(); ++i) {
    if (i == chosen) continue;
    Block nb;
    for (int e : pi.blocks()[static_cast<std::size_t>(i)]) nb.push_back(e > c.l ? e - len : e);
    rest.push_back(std::move(nb));
  }
  for (int p = 1; p <= pi.size(); ++p)
    if (p < c.k || p > c.l) rest_colors.push_back(colors[static_cast<std::size_t>(p - 1)]);
  c.rest = NCPartition(std::move(rest), std::move(rest_colors));
  return c;
}

}  // namespace

Mat e_pi(const NCPartition& pi, const CumulantFamily& family, std::span<const Mat> args, Collapse order,
         Grouping grouping) {
  if (static_cast<int>(args.size()) != pi.arity()) {
    throw ArityMismatch("e_pi: " + std::to_string(args.size()) + " arguments for arity " + std::to_string(pi.arity()));
  }
  if (pi.empty()) return args[0];
  const int d = family.space().d();
  const Mat one = Mat::Identity(d, d);
  auto c = pick_block(pi, colors_or_default(pi), order);
  MultiMap gen = family.generator(c.word);
  const auto k = static_cast<std::size_t>(c.k), l = static_cast<std::size_t>(c.l);
  Mat merged;
  if (grouping == Grouping::Absorb) {
    std::vector<Mat> inner{k == 1 ? args[0] : one};
    for (std::size_t j = k; j <= l; ++j) inner.push_back(args[j]);
    Mat value = gen(inner);
    merged = k == 1 ? value : Mat(args[k - 1] * value);
  } else {
    std::vector<Mat> inner{one};
    for (std::size_t j = k; j < l; ++j) inner.push_back(args[j]);
    inner.push_back(one);
    merged = args[k - 1] * gen(inner) * args[l];
  }
  std::vector<Mat> next(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(k - 1));
  next.push_back(merged);
  next.insert(next.end(), args.begin() + static_cast<std::ptrdiff_t>(l + 1), args.end());
  return e_pi(c.rest, family, next, order, grouping);
}

MultiMap e_pi_map(const NCPartition& pi, const CumulantFamily& family, Collapse order) {
  const int d = family.space().d();
  if (pi.empty()) return MultiMap::identity(d);
  auto c = pick_block(pi, colors_or_default(pi), order);
  MultiMap gen = family.generator(c.word);
  MultiMap merged = gen;
  if (c.k > 1) {
    std::vector<MultiMap> slots{MultiMap::constant(Mat::Identity(d, d))};
    for (int j = c.k; j <= c.l; ++j) slots.push_back(MultiMap::identity(d));
    merged = multimap_compose(MultiMap::product(d), {MultiMap::identity(d), multimap_compose(gen, slots)});
  }
  return multimap_partial(e_pi_map(c.rest, family, order), c.k, merged);
}

MultiMap moment_cumulant_sum(const CumulantFamily& family, const std::vector<int>& word, Collapse order) {
  const int n = static_cast<int>(word.size());
  const auto parts = family.kind() == CumulantKind::Boolean ? enumerate_interval(n) : enumerate_nc(n);
  std::optional<Tensor> acc;
  for (const auto& p : parts) {
    Tensor t = tabulate_tensor(e_pi_map(NCPartition(p.blocks(), word), family, order));
    double w = family.kind() == CumulantKind::Monotone ? 1.0 / static_cast<double>(tree_factorial(p)) : 1.0;
    if (!acc) {
      acc = t;
      for (auto& x : acc->data) x *= w;
    } else {
      for (std::size_t i = 0; i < t.data.size(); ++i) acc->data[i] += w * t.data[i];
    }
  }
  return MultiMap::from_tensor(std::move(*acc));
}

McReport verify_mc(const CumulantFamily& moments, const CumulantFamily& free, const CumulantFamily& boolean,
                   const CumulantFamily& monotone, const std::vector<std::vector<int>>& words, double tol) {
  McReport r;
  r.tol = tol;
  for (const auto& w : words) {
    McEntry e;
    e.word = w;
    MultiMap m = moments.generator(w);
    e.free = multimap_deviation(moment_cumulant_sum(free, w), m);
    e.boolean = multimap_deviation(moment_cumulant_sum(boolean, w), m);
    e.monotone = multimap_deviation(moment_cumulant_sum(monotone, w), m);
    auto& agg = r.per_order[static_cast<int>(w.size())];
    for (const auto* dev : {&e.free, &e.boolean, &e.monotone}) {
      agg.merge(*dev);
      if (!dev->within(tol)) r.pass = false;
    }
    r.entries.push_back(std::move(e));
  }
  return r;
}

std::vector<std::vector<int>> all_color_words(const std::vector<int>& alphabet, int max_len) {
  std::vector<std::vector<int>> out, frontier{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : frontier)
      for (int a : alphabet) {
        auto x = w;
        x.push_back(a);
        next.push_back(std::move(x));
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace ovc
