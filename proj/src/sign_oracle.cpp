#include "tarski/sign_oracle.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "tarski/errors.hpp"

namespace tarski {

namespace {

std::atomic<int> g_debug_default{-1};

int sign_entry(int s) {
  if (s < -1 || s > 1) throw UsageError("sign entry out of {-1,0,1}: " + std::to_string(s));
  return s;
}

}  // namespace

SignVector::SignVector(std::initializer_list<int> init) {
  signs_.reserve(init.size());
  for (int s : init) signs_.push_back(static_cast<Sign>(sign_entry(s)));
}

SignVector::SignVector(const std::vector<int>& signs) {
  signs_.reserve(signs.size());
  for (int s : signs) signs_.push_back(static_cast<Sign>(sign_entry(s)));
}

void SignVector::set(std::size_t i, int s) { signs_.at(i) = static_cast<Sign>(sign_entry(s)); }

bool SignVector::uniform_nonneg() const {
  for (Sign s : signs_) {
    if (s < 0) return false;
  }
  return true;
}

bool SignVector::uniform_nonpos() const {
  for (Sign s : signs_) {
    if (s > 0) return false;
  }
  return true;
}

std::string SignVector::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < signs_.size(); ++i) {
    if (i) out += ",";
    out += signs_[i] > 0 ? "+1" : (signs_[i] < 0 ? "-1" : "0");
  }
  return out + ")";
}

DebugQueryScope::DebugQueryScope(std::shared_ptr<QueryStats> stats) : stats_(std::move(stats)) {
  ++stats_->debug_depth;
}

DebugQueryScope::~DebugQueryScope() { --stats_->debug_depth; }

bool debug_checks_default() {
  int v = g_debug_default.load();
  if (v < 0) {
    const char* env = std::getenv("TARSKI_DEBUG_CHECKS");
    v = (env != nullptr && std::strcmp(env, "1") == 0) ? 1 : 0;
    g_debug_default.store(v);
  }
  return v == 1;
}

void set_debug_checks_default(bool on) { g_debug_default.store(on ? 1 : 0); }

// ---------------------------------------------------------------------------

FnOracle::FnOracle(Box box, Fn fn)
    : box_(std::move(box)),
      fn_(std::move(fn)),
      stats_(std::make_shared<QueryStats>()),
      cache_(std::make_shared<Cache>()) {}

Point FnOracle::query(const Point& x) const {
  if (!box_.contains(x)) throw UsageError("query " + x.str() + " outside box " + box_.str());
  QueryStats& st = *stats_;
  const bool debug = st.debug_depth > 0;
  auto it = cache_->find(x);
  if (it == cache_->end()) {
    it = cache_->emplace(x, Entry{fn_(x), false}).first;
  }
  if (debug) {
    ++st.debug_queries;
    ++st.per_adapter["debug"];
    return it->second.value;
  }
  ++st.total_queries;
  if (!it->second.counted) {
    it->second.counted = true;
    ++st.distinct_queries;
  }
  return it->second.value;
}

Point FnOracle::evaluate(const Point& x) const {
  if (!box_.contains(x)) throw UsageError("evaluate " + x.str() + " outside box " + box_.str());
  return fn_(x);
}

std::size_t FnOracle::counted_cache_size() const {
  std::size_t n = 0;
  for (const auto& [k, e] : *cache_) n += e.counted ? 1 : 0;
  return n;
}

// ---------------------------------------------------------------------------

SignOracle SignOracle::root(Box box, std::size_t outputs, RawEval raw, std::string label) {
  struct Entry {
    SignVector value;
    bool counted = false;
  };
  auto stats = std::make_shared<QueryStats>();
  auto cache = std::make_shared<std::unordered_map<Point, Entry, PointHash>>();
  Eval eval = [raw = std::move(raw), cache, st = stats](const Point& x, bool counted) -> SignVector {
    if (!counted) return raw(x);
    auto it = cache->find(x);
    if (it == cache->end()) it = cache->emplace(x, Entry{raw(x), false}).first;
    if (st->debug_depth > 0) {
      ++st->debug_queries;
      ++st->per_adapter["debug"];
      return it->second.value;
    }
    ++st->total_queries;
    if (!it->second.counted) {
      it->second.counted = true;
      ++st->distinct_queries;
    }
    return it->second.value;
  };
  return SignOracle(std::move(box), outputs, std::move(eval), std::move(stats), std::move(label));
}

SignOracle::SignOracle(Box box, std::size_t outputs, Eval eval, std::shared_ptr<QueryStats> stats,
                       std::string label)
    : box_(std::move(box)),
      outputs_(outputs),
      eval_(std::move(eval)),
      stats_(std::move(stats)),
      label_(std::move(label)) {}

void SignOracle::check_point(const Point& x) const {
  if (!box_.contains(x)) throw UsageError("query " + x.str() + " outside box " + box_.str());
}

SignVector SignOracle::query(const Point& x) const {
  check_point(x);
  if (stats_->debug_depth == 0) ++stats_->per_adapter[label_];
  return eval_(x, true);
}

SignVector SignOracle::evaluate(const Point& x) const {
  check_point(x);
  return eval_(x, false);
}

// ---------------------------------------------------------------------------

SignOracle slice_oracle(const FnOracle& f, std::size_t dim, Coord value) {
  const Box& fb = f.box();
  if (dim >= fb.dim()) throw UsageError("slice dimension out of range");
  if (value < fb.lo()[dim] || value > fb.hi()[dim]) {
    throw UsageError("slice value " + std::to_string(value) + " outside [" +
                     std::to_string(fb.lo()[dim]) + "," + std::to_string(fb.hi()[dim]) + "]");
  }
  const std::size_t k1 = fb.dim();
  auto eval = [f, dim, value, k1](const Point& x, bool counted) {
    Point xp = x.inserted(dim, value);
    Point fx = f.eval(xp, counted);
    SignVector g(k1);
    std::size_t out = 0;
    for (std::size_t j = 0; j < k1; ++j) {
      if (j == dim) continue;
      g.set(out++, sgn(fx[j] - xp[j]));
    }
    g.set(out, sgn(fx[dim] - xp[dim]));
    return g;
  };
  return SignOracle(fb.erased(dim), k1, std::move(eval), f.stats_handle(), "slice");
}

SignOracle box_restriction(const SignOracle& o, const Box& sub, bool check_certificates) {
  if (!o.box().contains(sub)) {
    throw UsageError("restriction " + sub.str() + " not inside " + o.box().str());
  }
  if (check_certificates) {
    DebugQueryScope scope(o.stats_handle());
    SignVector lo = o.query(sub.lo());
    SignVector hi = o.query(sub.hi());
    for (std::size_t t = 0; t < sub.dim(); ++t) {
      if (lo[t] < 0 || hi[t] > 0) {
        throw InstanceInvalid("corner certificate failed for " + sub.str() + ": g(lo)=" +
                              lo.str() + " g(hi)=" + hi.str());
      }
    }
  }
  auto eval = [o](const Point& x, bool counted) { return o.eval(x, counted); };
  return SignOracle(sub, o.outputs(), std::move(eval), o.stats_handle(), "restrict");
}

SignOracle project_last(const SignOracle& g, const Point& q, std::size_t a, std::size_t j) {
  const std::size_t total = g.dim();
  if (a == 0 || a + q.dim() != total) throw UsageError("project_last: dimension mismatch");
  if (j < a + 1 || j > g.outputs()) throw UsageError("project_last: output index out of range");
  Box inner = g.box().slice(0, a);
  if (!g.box().slice(a, q.dim()).contains(q)) throw UsageError("project_last: suffix outside box");
  auto eval = [g, q, a, j](const Point& x, bool counted) {
    SignVector full = g.eval(x.concat(q), counted);
    SignVector out(a + 1);
    for (std::size_t t = 0; t < a; ++t) out.set(t, full[t]);
    out.set(a, full[j - 1]);
    return out;
  };
  return SignOracle(std::move(inner), a + 1, std::move(eval), g.stats_handle(), "project");
}

SignOracle collapse_last_up(const SignOracle& o) {
  auto eval = [o](const Point& x, bool counted) {
    SignVector s = o.eval(x, counted);
    s.set(s.size() - 1, s.back() >= 0 ? 1 : -1);
    return s;
  };
  return SignOracle(o.box(), o.outputs(), std::move(eval), o.stats_handle(), "collapse_up");
}

SignOracle collapse_last_down(const SignOracle& o) {
  auto eval = [o](const Point& x, bool counted) {
    SignVector s = o.eval(x, counted);
    s.set(s.size() - 1, s.back() <= 0 ? -1 : 1);
    return s;
  };
  return SignOracle(o.box(), o.outputs(), std::move(eval), o.stats_handle(), "collapse_down");
}

SignOracle sign_table_oracle(const Box& box, std::vector<SignVector> table, std::string label) {
  if (table.size() != box.volume()) throw UsageError("sign table size does not match box volume");
  const std::size_t m = table.empty() ? box.dim() + 1 : table.front().size();
  for (const SignVector& s : table) {
    if (s.size() != m) throw UsageError("sign table rows have unequal length");
  }
  auto shared = std::make_shared<const std::vector<SignVector>>(std::move(table));
  return SignOracle::root(
      box, m, [box, shared](const Point& x) { return (*shared)[box.index_of(x)]; },
      std::move(label));
}

}  // namespace tarski
