#include "tarski/instances.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "tarski/errors.hpp"
#include "tarski/kernels.hpp"
#include "tarski/rng.hpp"

namespace tarski {

namespace {

using nlohmann::json;

std::vector<std::uint64_t> strides(const Box& box) {
  std::vector<std::uint64_t> s(box.dim(), 1);
  for (std::size_t i = box.dim(); i-- > 1;) {
    s[i - 1] = s[i] * static_cast<std::uint64_t>(box.side(i));
  }
  return s;
}

// All monotone maps per output coordinate; the caller takes the product.
std::vector<std::vector<std::vector<Coord>>> coordinate_maps(
    const Box& box, const std::function<std::pair<Coord, Coord>(const Point&, std::size_t)>& bounds,
    std::size_t outputs, std::uint64_t cap) {
  std::vector<std::vector<std::vector<Coord>>> per(outputs);
  const auto pts = enumerate_box(box);
  for (std::size_t t = 0; t < outputs; ++t) {
    std::vector<Coord> lo(pts.size());
    std::vector<Coord> hi(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) std::tie(lo[i], hi[i]) = bounds(pts[i], t);
    for_each_monotone_chain_map(box, lo, hi, [&](const std::vector<Coord>& vals) {
      if (per[t].size() >= cap) throw UsageError("enumeration exceeds cap " + std::to_string(cap));
      per[t].push_back(vals);
    });
  }
  return per;
}

std::uint64_t product_count(const std::vector<std::vector<std::vector<Coord>>>& per,
                            std::uint64_t cap) {
  std::uint64_t total = 1;
  for (const auto& l : per) {
    if (l.empty()) return 0;
    if (total > cap / l.size()) {
      throw UsageError("enumeration exceeds cap " + std::to_string(cap));
    }
    total *= l.size();
  }
  return total;
}

// Odometer over the product of per-coordinate lists, first coordinate slowest.
void for_each_product(const std::vector<std::vector<std::vector<Coord>>>& per,
                      const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> idx(per.size(), 0);
  for (const auto& l : per) {
    if (l.empty()) return;
  }
  while (true) {
    visit(idx);
    std::size_t t = per.size();
    while (t > 0) {
      --t;
      if (++idx[t] < per[t].size()) break;
      idx[t] = 0;
      if (t == 0) return;
    }
    if (per.empty()) return;
  }
}

std::vector<Coord> int_array(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array()) {
    throw LoadError(std::string("missing or non-array field \"") + field + "\"");
  }
  std::vector<Coord> out;
  for (const auto& e : j[field]) {
    if (!e.is_number_integer()) throw LoadError(std::string("non-integer entry in \"") + field + "\"");
    out.push_back(e.get<Coord>());
  }
  return out;
}

std::vector<Coord> int_row(const json& e, std::size_t len, std::size_t row) {
  if (!e.is_array() || e.size() != len) {
    throw LoadError("values[" + std::to_string(row) + "] must be an array of " +
                    std::to_string(len) + " integers");
  }
  std::vector<Coord> out;
  for (const auto& c : e) {
    if (!c.is_number_integer()) throw LoadError("non-integer in values[" + std::to_string(row) + "]");
    out.push_back(c.get<Coord>());
  }
  return out;
}

}  // namespace

std::string kind_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::HiddenPoint: return "hidden_point";
    case InstanceKind::ConstantShift: return "constant_shift";
    case InstanceKind::RandomSteps: return "random_steps";
    case InstanceKind::ExplicitTable: return "explicit_table";
    case InstanceKind::ExplicitSignTable: return "explicit_sign_table";
  }
  return "?";
}

InstanceKind parse_kind(const std::string& name) {
  for (auto k : {InstanceKind::HiddenPoint, InstanceKind::ConstantShift, InstanceKind::RandomSteps,
                 InstanceKind::ExplicitTable, InstanceKind::ExplicitSignTable}) {
    if (kind_name(k) == name) return k;
  }
  throw UsageError("unknown instance kind: " + name);
}

FnOracle gen_hidden_point(const Box& box, const Point& p) {
  if (!box.contains(p)) throw UsageError("hidden point " + p.str() + " outside " + box.str());
  return FnOracle(box, [p](const Point& x) {
    Point y = x;
    for (std::size_t i = 0; i < x.dim(); ++i) y[i] += sgn(p[i] - x[i]);
    return y;
  });
}

FnOracle gen_constant_shift(const Box& box, const std::vector<Coord>& v) {
  if (v.size() != box.dim()) throw UsageError("shift vector has wrong dimension");
  return FnOracle(box, [box, v](const Point& x) {
    Point y = x;
    for (std::size_t i = 0; i < x.dim(); ++i) y[i] = std::clamp(x[i] + v[i], box.lo()[i], box.hi()[i]);
    return y;
  });
}

FnOracle gen_steps(const Box& box, StepSet steps) {
  if (steps.size() != box.dim()) throw UsageError("need one step set per coordinate");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (const auto& [at, w] : steps[i]) {
      if (!box.contains(at) || w < box.lo()[i] || w > box.hi()[i]) {
        throw UsageError("step (" + at.str() + "," + std::to_string(w) + ") outside " + box.str());
      }
    }
  }
  auto shared = std::make_shared<const StepSet>(std::move(steps));
  return FnOracle(box, [box, shared](const Point& x) {
    Point y = box.lo();
    for (std::size_t i = 0; i < x.dim(); ++i) {
      for (const auto& [at, w] : (*shared)[i]) {
        if (w > y[i] && leq(at, x)) y[i] = w;
      }
    }
    return y;
  });
}

FnOracle gen_random_steps(const Box& box, std::uint64_t seed, std::uint64_t num_steps) {
  if (num_steps == 0) throw UsageError("num_steps must be >= 1");
  Xorshift64Star rng(seed);
  StepSet steps(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    for (std::uint64_t s = 0; s < num_steps; ++s) {
      Point at(box.dim());
      for (std::size_t d = 0; d < box.dim(); ++d) at[d] = rng.uniform(box.lo()[d], box.hi()[d]);
      const Coord w = rng.uniform(box.lo()[i], box.hi()[i]);
      steps[i].emplace_back(std::move(at), w);
    }
  }
  return gen_steps(box, std::move(steps));
}

SignOracle gen_sign_hidden_point(const Box& box, const Point& p, const std::vector<Coord>& weights) {
  if (!box.contains(p)) throw UsageError("hidden point " + p.str() + " outside " + box.str());
  if (weights.size() != box.dim()) throw UsageError("weights have wrong dimension");
  for (Coord w : weights) {
    if (w < 1) throw UsageError("weights must be positive");
  }
  const std::size_t k = box.dim();
  return SignOracle::root(box, k + 1, [p, weights, k](const Point& x) {
    SignVector g(k + 1);
    Coord acc = 0;
    for (std::size_t i = 0; i < k; ++i) {
      g.set(i, sgn(p[i] - x[i]));
      acc += weights[i] * (x[i] - p[i]);
    }
    g.set(k, sgn(acc));
    return g;
  });
}

FnOracle from_table(const Box& box, std::vector<Point> values) {
  if (values.size() != box.volume()) throw UsageError("table size does not match box volume");
  auto shared = std::make_shared<const std::vector<Point>>(std::move(values));
  return FnOracle(box, [box, shared](const Point& x) { return (*shared)[box.index_of(x)]; });
}

FnOracle instantiate(const InstanceSpec& spec) {
  const Box box = spec.box();
  switch (spec.kind) {
    case InstanceKind::HiddenPoint: return gen_hidden_point(box, spec.p);
    case InstanceKind::ConstantShift: return gen_constant_shift(box, spec.v);
    case InstanceKind::RandomSteps: return gen_random_steps(box, spec.seed, spec.num_steps);
    case InstanceKind::ExplicitTable: return from_table(box, spec.values);
    case InstanceKind::ExplicitSignTable: break;
  }
  throw UsageError("explicit_sign_table is a sign instance, not a map");
}

SignOracle instantiate_sign(const InstanceSpec& spec) {
  if (!spec.is_sign_instance()) throw UsageError(kind_name(spec.kind) + " is not a sign instance");
  return sign_table_oracle(spec.box(), spec.signs);
}

std::string serialize_instance(const InstanceSpec& spec) {
  json j;
  j["kind"] = kind_name(spec.kind);
  j["sides"] = spec.sides;
  switch (spec.kind) {
    case InstanceKind::HiddenPoint: j["p"] = spec.p.vec(); break;
    case InstanceKind::ConstantShift: j["v"] = spec.v; break;
    case InstanceKind::RandomSteps:
      j["seed"] = spec.seed;
      j["num_steps"] = spec.num_steps;
      break;
    case InstanceKind::ExplicitTable: {
      json rows = json::array();
      for (const Point& p : spec.values) rows.push_back(p.vec());
      j["values"] = std::move(rows);
      break;
    }
    case InstanceKind::ExplicitSignTable: {
      json rows = json::array();
      for (const SignVector& s : spec.signs) {
        std::vector<int> r;
        for (std::size_t t = 0; t < s.size(); ++t) r.push_back(s[t]);
        rows.push_back(r);
      }
      j["values"] = std::move(rows);
      break;
    }
  }
  return j.dump() + "\n";
}

InstanceSpec parse_instance(const std::string& document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw LoadError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw LoadError("instance document must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw LoadError("missing \"kind\"");

  InstanceSpec spec;
  try {
    spec.kind = parse_kind(j["kind"].get<std::string>());
  } catch (const UsageError& e) {
    throw LoadError(e.what());
  }
  spec.sides = int_array(j, "sides");
  if (spec.sides.empty()) throw LoadError("\"sides\" must be nonempty");
  for (Coord s : spec.sides) {
    if (s < 1 || s > kMaxSide) throw LoadError("side out of range: " + std::to_string(s));
  }
  const Box box = spec.box();
  const std::size_t k = box.dim();

  switch (spec.kind) {
    case InstanceKind::HiddenPoint: {
      spec.p = Point(int_array(j, "p"));
      if (spec.p.dim() != k || !box.contains(spec.p)) {
        throw LoadError("hidden point " + spec.p.str() + " outside " + box.str());
      }
      break;
    }
    case InstanceKind::ConstantShift: {
      spec.v = int_array(j, "v");
      if (spec.v.size() != k) throw LoadError("\"v\" must have " + std::to_string(k) + " entries");
      break;
    }
    case InstanceKind::RandomSteps: {
      if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
        throw LoadError("random_steps needs a nonnegative integer \"seed\"");
      }
      spec.seed = j["seed"].get<std::uint64_t>();
      if (j.contains("num_steps")) {
        if (!j["num_steps"].is_number_unsigned() || j["num_steps"].get<std::uint64_t>() == 0) {
          throw LoadError("\"num_steps\" must be a positive integer");
        }
        spec.num_steps = j["num_steps"].get<std::uint64_t>();
      }
      break;
    }
    case InstanceKind::ExplicitTable:
    case InstanceKind::ExplicitSignTable: {
      if (!j.contains("values") || !j["values"].is_array()) throw LoadError("missing \"values\"");
      const auto& rows = j["values"];
      if (rows.size() != box.volume()) {
        throw LoadError("\"values\" has " + std::to_string(rows.size()) + " rows, box has " +
                        std::to_string(box.volume()) + " points");
      }
      const bool sign = spec.kind == InstanceKind::ExplicitSignTable;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        auto r = int_row(rows[i], sign ? k + 1 : k, i);
        if (sign) {
          try {
            spec.signs.emplace_back(std::vector<int>(r.begin(), r.end()));
          } catch (const UsageError& e) {
            throw LoadError("values[" + std::to_string(i) + "]: " + e.what());
          }
        } else {
          spec.values.emplace_back(std::move(r));
        }
      }
      const ValidationReport rep = sign ? kernels::check_sign_table(box, spec.signs, false)
                                        : kernels::check_fn_table(box, spec.values, false);
      if (!rep.ok()) throw LoadError(rep.message);
      break;
    }
  }
  return spec;
}

InstanceSpec load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void save_instance(const InstanceSpec& spec, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << serialize_instance(spec);
}

void for_each_monotone_chain_map(const Box& box, const std::vector<Coord>& lo,
                                 const std::vector<Coord>& hi,
                                 const std::function<void(const std::vector<Coord>&)>& visit) {
  const std::uint64_t n = box.volume();
  if (lo.size() != n || hi.size() != n) throw UsageError("bound vectors do not match box volume");
  const auto stride = strides(box);
  const auto pts = enumerate_box(box);
  std::vector<Coord> val(n);

  // Lower bound at i from already assigned predecessors.
  auto floor_at = [&](std::size_t i) {
    Coord f = lo[i];
    for (std::size_t d = 0; d < box.dim(); ++d) {
      if (pts[i][d] > box.lo()[d]) f = std::max(f, val[i - stride[d]]);
    }
    return f;
  };

  if (n == 0) return;
  std::size_t i = 0;
  val[0] = floor_at(0) - 1;
  while (true) {
    ++val[i];
    if (val[i] > hi[i]) {
      if (i == 0) return;
      --i;
      continue;
    }
    if (i + 1 == n) {
      visit(val);
      continue;
    }
    ++i;
    val[i] = floor_at(i) - 1;
  }
}

std::uint64_t count_monotone_maps(const Box& box, std::uint64_t cap) {
  auto per = coordinate_maps(
      box, [&](const Point&, std::size_t t) { return std::pair{box.lo()[t], box.hi()[t]}; },
      box.dim(), cap);
  return product_count(per, cap);
}

void for_each_monotone_map(const Box& box, const std::function<void(const std::vector<Point>&)>& visit,
                           std::uint64_t cap) {
  auto per = coordinate_maps(
      box, [&](const Point&, std::size_t t) { return std::pair{box.lo()[t], box.hi()[t]}; },
      box.dim(), cap);
  product_count(per, cap);
  const std::size_t n = box.volume();
  std::vector<Point> table(n, Point(box.dim()));
  for_each_product(per, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < idx.size(); ++t) table[i][t] = per[t][idx[t]][i];
    }
    visit(table);
  });
}

std::vector<std::vector<Point>> enumerate_monotone_maps(const Box& box, std::uint64_t cap) {
  std::vector<std::vector<Point>> out;
  for_each_monotone_map(box, [&](const std::vector<Point>& t) { out.push_back(t); }, cap);
  return out;
}

namespace {

// Coordinate t < k stores F_t(x) = x_t + g_t(x); the last output stores the sign.
std::vector<std::vector<std::vector<Coord>>> sign_coordinate_maps(const Box& box, std::uint64_t cap) {
  const std::size_t k = box.dim();
  return coordinate_maps(
      box,
      [&](const Point& x, std::size_t t) -> std::pair<Coord, Coord> {
        if (t == k) return {-1, 1};
        return {std::max(box.lo()[t], x[t] - 1), std::min(box.hi()[t], x[t] + 1)};
      },
      k + 1, cap);
}

}  // namespace

void for_each_valid_sign_table(const Box& box,
                               const std::function<void(const std::vector<SignVector>&)>& visit,
                               std::uint64_t cap) {
  const std::size_t k = box.dim();
  auto per = sign_coordinate_maps(box, cap);
  product_count(per, cap);
  const auto pts = enumerate_box(box);
  std::vector<SignVector> table(pts.size(), SignVector(k + 1));
  for_each_product(per, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t t = 0; t < k; ++t) {
        table[i].set(t, static_cast<int>(per[t][idx[t]][i] - pts[i][t]));
      }
      table[i].set(k, static_cast<int>(per[k][idx[k]][i]));
    }
    visit(table);
  });
}

std::uint64_t count_valid_sign_tables(const Box& box, std::uint64_t cap) {
  return product_count(sign_coordinate_maps(box, cap), cap);
}

}  // namespace tarski
