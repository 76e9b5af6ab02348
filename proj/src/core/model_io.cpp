/*
 * Copyright 2026 The hpyparse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hpyparse/model_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "hpyparse/error.hpp"

namespace hpyp {

namespace {

constexpr std::string_view kMagic = "HPYPMODL";

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
  }
  std::string& buffer() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  // Element counts are bounded by the bytes left so a corrupt length cannot
  // trigger a huge allocation.
  std::uint64_t count(std::size_t min_bytes_each) {
    const std::uint64_t n = u64();
    if (min_bytes_each > 0 && n > (data_.size() - pos_) / min_bytes_each)
      throw FormatError("model file is truncated");
    return n;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw FormatError("model file is truncated");
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

std::uint32_t crc(std::string_view bytes) {
  uLong c = crc32(0L, Z_NULL, 0);
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - off, 1u << 30));
    c = crc32(c, reinterpret_cast<const Bytef*>(bytes.data() + off), chunk);
    off += chunk;
  }
  return static_cast<std::uint32_t>(c);
}

void write_payload(const Model& m, Writer& w) {
  w.u8(static_cast<std::uint8_t>(m.settings.task));
  w.u8(static_cast<std::uint8_t>(m.settings.context_mode));
  w.u32(m.settings.rare_threshold);

  const Grammar& g = m.grammar;
  w.u64(g.nonterminals().size());
  for (SymbolId i = 0; i < g.nonterminals().size(); ++i) w.str(g.nonterminals().text(i));
  w.u64(g.terminals().size());
  for (SymbolId i = 0; i < g.terminals().size(); ++i) w.str(g.terminals().text(i));
  w.u32(g.root());
  w.u64(g.num_rules());
  for (RuleId r = 0; r < g.num_rules(); ++r) {
    const Rule& rule = g.rule(r);
    w.u8(static_cast<std::uint8_t>(rule.shape));
    w.u32(rule.lhs);
    w.u32(rule.rhs[0]);
    w.u32(rule.rhs[1]);
  }

  w.u64(m.pcfg.size());
  for (double p : m.pcfg.probs()) w.f64(p);

  const ContextTrie& t = m.trie;
  const BaseDistribution& base = t.base();
  w.u8(static_cast<std::uint8_t>(base.variant()));
  w.u64(base.num_rules());
  for (RuleId r = 0; r < base.num_rules(); ++r) {
    w.f64(base.prob(r));
    w.u32(base.group(r));
  }
  w.u32(t.context_cap());
  w.u64(t.params().size());
  for (const DepthParam& p : t.params()) {
    w.f64(p.discount);
    w.f64(p.concentration);
    w.f64(p.prior.beta_a);
    w.f64(p.prior.beta_b);
    w.f64(p.prior.gamma_shape);
    w.f64(p.prior.gamma_rate);
  }

  std::uint64_t restaurants = 0;
  t.for_each([&](std::span<const ContextElem>, const Restaurant&) { ++restaurants; });
  w.u64(restaurants);
  t.for_each([&](std::span<const ContextElem> path, const Restaurant& r) {
    w.u64(path.size());
    for (ContextElem e : path) w.u32(e);
    std::vector<std::pair<RuleId, TableCount>> dishes(r.dishes().begin(), r.dishes().end());
    std::sort(dishes.begin(), dishes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    w.u64(dishes.size());
    for (const auto& [rule, c] : dishes) {
      w.u32(rule);
      w.u32(c.customers);
      w.u32(c.tables);
    }
  });
}

Model read_payload(Reader& r) {
  Model m;
  const std::uint8_t task = r.u8();
  const std::uint8_t mode = r.u8();
  if (task > 1 || mode > 1) throw FormatError("model file has an unknown task or context mode");
  m.settings.task = static_cast<Task>(task);
  m.settings.context_mode = static_cast<ContextMode>(mode);
  m.settings.rare_threshold = r.u32();

  Grammar& g = m.grammar;
  for (std::uint64_t n = r.count(4), i = 0; i < n; ++i) g.nonterminals().intern(r.str());
  for (std::uint64_t n = r.count(4), i = 0; i < n; ++i) g.terminals().intern(r.str());
  const std::uint32_t root = r.u32();
  if (root != kNoSymbol && root >= g.nonterminals().size()) throw FormatError("model root symbol out of range");
  g.set_root(root);
  const std::uint64_t num_rules = r.count(13);
  for (std::uint64_t i = 0; i < num_rules; ++i) {
    const std::uint8_t shape = r.u8();
    Rule rule;
    rule.lhs = r.u32();
    rule.rhs[0] = r.u32();
    rule.rhs[1] = r.u32();
    if (shape > 2) throw FormatError("model rule has an unknown shape");
    rule.shape = static_cast<RuleShape>(shape);
    const std::size_t nt = g.nonterminals().size();
    const bool ok = rule.lhs < nt &&
                    (rule.shape == RuleShape::Lexical ? rule.rhs[0] < g.terminals().size() : rule.rhs[0] < nt) &&
                    (rule.shape != RuleShape::Binary || rule.rhs[1] < nt);
    if (!ok) throw FormatError("model rule refers to an unknown symbol");
    if (g.add_rule(rule) != i) throw FormatError("model contains a duplicate rule");
  }

  std::vector<double> probs(r.count(8));
  for (double& p : probs) p = r.f64();
  if (probs.size() != num_rules) throw FormatError("model PCFG size does not match the rule count");
  m.pcfg = ProbTable(std::move(probs));

  const std::uint8_t variant = r.u8();
  if (variant > 1) throw FormatError("model has an unknown base distribution");
  std::vector<double> base_probs(r.count(12));
  std::vector<std::uint32_t> groups(base_probs.size());
  for (std::size_t i = 0; i < base_probs.size(); ++i) {
    base_probs[i] = r.f64();
    groups[i] = r.u32();
    if (groups[i] >= g.nonterminals().size()) throw FormatError("model base group out of range");
  }
  if (base_probs.size() != num_rules) throw FormatError("model base size does not match the rule count");
  const std::uint32_t cap = r.u32();
  m.trie = ContextTrie(BaseDistribution(static_cast<BaseVariant>(variant), std::move(base_probs), std::move(groups)), cap);
  std::vector<DepthParam> params(r.count(48));
  for (DepthParam& p : params) {
    p.discount = r.f64();
    p.concentration = r.f64();
    p.prior.beta_a = r.f64();
    p.prior.beta_b = r.f64();
    p.prior.gamma_shape = r.f64();
    p.prior.gamma_rate = r.f64();
  }
  try {
    m.trie.set_params(std::move(params));
  } catch (const UsageError& e) {
    throw FormatError(std::string("model parameters are invalid: ") + e.what());
  }

  const std::uint64_t restaurants = r.count(16);
  std::vector<ContextElem> path;
  for (std::uint64_t k = 0; k < restaurants; ++k) {
    path.resize(r.count(4));
    for (ContextElem& e : path) e = r.u32();
    for (std::uint64_t n = r.count(12), i = 0; i < n; ++i) {
      const RuleId rule = r.u32();
      TableCount c;
      c.customers = r.u32();
      c.tables = r.u32();
      if (rule >= num_rules) throw FormatError("model restaurant refers to an unknown rule");
      m.trie.set_counts(path, rule, c);
    }
  }
  if (!r.done()) throw FormatError("model payload has trailing bytes");
  return m;
}

}  // namespace

std::string serialize_model(const Model& model) {
  Writer payload;
  write_payload(model, payload);
  Writer out;
  out.buffer().append(kMagic);
  out.u32(kModelVersion);
  out.u64(payload.buffer().size());
  out.buffer().append(payload.buffer());
  out.u32(crc(payload.buffer()));
  return std::move(out.buffer());
}

Model deserialize_model(std::string_view bytes) {
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic)
    throw FormatError("not a model file (bad magic)");
  Reader header(bytes.substr(kMagic.size()));
  const std::uint32_t version = header.u32();
  if (version != kModelVersion)
    throw FormatError("model version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kModelVersion) + ")");
  const std::uint64_t length = header.u64();
  const std::size_t offset = kMagic.size() + 12;
  if (bytes.size() - offset < length || bytes.size() - offset - length < 4)
    throw FormatError("model file is truncated");
  if (bytes.size() - offset - length != 4) throw FormatError("model file has trailing bytes");
  const std::string_view payload = bytes.substr(offset, length);
  Reader tail(bytes.substr(offset + length));
  if (tail.u32() != crc(payload)) throw FormatError("model checksum mismatch");
  Reader body(payload);
  try {
    return read_payload(body);
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("model payload is inconsistent: ") + e.what());
  }
}

void save_model(const Model& model, const std::string& path) {
  const std::string bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing '" + path + "'");
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model '" + path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace hpyp
