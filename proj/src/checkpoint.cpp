#include "dgner/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dgner/errors.hpp"

namespace dgner {

namespace {

constexpr char kMagic[8] = {'N', 'E', 'R', 'C', 'K', 'P', 'T', '\n'};
constexpr std::uint32_t kVersion = 1;

// All integers and floats little-endian regardless of host.
void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

void put_f64(std::ostream& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void put_u8(std::ostream& out, std::uint8_t v) {
  out.put(static_cast<char>(v));
}

void put_str(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& in) {
  char b[4];
  in.read(b, 4);
  if (!in) throw DataError("truncated checkpoint file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  char b[8];
  in.read(b, 8);
  if (!in) throw DataError("truncated checkpoint file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

std::uint8_t get_u8(std::istream& in) {
  const int c = in.get();
  if (c == EOF) throw DataError("truncated checkpoint file");
  return static_cast<std::uint8_t>(c);
}

std::string get_str(std::istream& in) {
  const std::uint32_t len = get_u32(in);
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw DataError("truncated checkpoint file");
  return s;
}

}  // namespace

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kVersion);

  const ModelConfig& c = m.config;
  put_u8(out, static_cast<std::uint8_t>(c.arch));
  put_u32(out, static_cast<std::uint32_t>(c.layers));
  put_u8(out, static_cast<std::uint8_t>(c.interaction));
  put_u32(out, static_cast<std::uint32_t>(c.hidden));
  put_u32(out, static_cast<std::uint32_t>(c.word_dim));
  put_u32(out, static_cast<std::uint32_t>(c.char_emb_dim));
  put_u32(out, static_cast<std::uint32_t>(c.char_hidden));
  put_u32(out, static_cast<std::uint32_t>(c.rel_dim));
  put_f64(out, c.dropout);
  put_u32(out, static_cast<std::uint32_t>(c.gcn_layers));
  put_u8(out, c.gcn_relational ? 1 : 0);
  put_u8(out, c.use_context_vectors ? 1 : 0);
  put_u32(out, static_cast<std::uint32_t>(c.context_dim));
  put_u8(out, c.mask_transitions ? 1 : 0);
  put_u8(out, c.freeze_word_embeddings ? 1 : 0);

  put_u64(out, m.store.seed());

  const Vocabulary& v = m.vocab;
  put_u32(out, static_cast<std::uint32_t>(v.num_words()));
  for (int i = 0; i < v.num_words(); ++i) put_str(out, v.word(i));
  put_u32(out, static_cast<std::uint32_t>(v.num_chars()));
  for (int i = 0; i < v.num_chars(); ++i) put_u32(out, v.char_cp(i));
  put_u32(out, static_cast<std::uint32_t>(v.num_relations()));
  for (int i = 0; i < v.num_relations(); ++i) put_str(out, v.relation(i));
  put_u32(out, static_cast<std::uint32_t>(v.num_labels()));
  for (int i = 0; i < v.num_labels(); ++i) put_str(out, v.label(i));

  put_u32(out, static_cast<std::uint32_t>(m.store.params().size()));
  for (const auto& [name, t] : m.store.params()) {
    put_str(out, name);
    put_u8(out, t.trainable ? 1 : 0);
    put_u32(out, static_cast<std::uint32_t>(t.shape.size()));
    for (int d : t.shape) put_u32(out, static_cast<std::uint32_t>(d));
    for (double x : t.values) put_f64(out, x);
  }
  if (!out) throw DataError("failed writing checkpoint: " + path);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw DataError(path + " is not a checkpoint file");
  const std::uint32_t version = get_u32(in);
  if (version != kVersion)
    throw DataError("unsupported checkpoint version " + std::to_string(version));

  ModelConfig c;
  c.arch = static_cast<Arch>(get_u8(in));
  c.layers = static_cast<int>(get_u32(in));
  c.interaction = static_cast<Interaction>(get_u8(in));
  c.hidden = static_cast<int>(get_u32(in));
  c.word_dim = static_cast<int>(get_u32(in));
  c.char_emb_dim = static_cast<int>(get_u32(in));
  c.char_hidden = static_cast<int>(get_u32(in));
  c.rel_dim = static_cast<int>(get_u32(in));
  c.dropout = get_f64(in);
  c.gcn_layers = static_cast<int>(get_u32(in));
  c.gcn_relational = get_u8(in) != 0;
  c.use_context_vectors = get_u8(in) != 0;
  c.context_dim = static_cast<int>(get_u32(in));
  c.mask_transitions = get_u8(in) != 0;
  c.freeze_word_embeddings = get_u8(in) != 0;

  const std::uint64_t seed = get_u64(in);

  Vocabulary v;
  const std::uint32_t n_words = get_u32(in);
  for (std::uint32_t i = 0; i < n_words; ++i) v.add_word(get_str(in));
  const std::uint32_t n_chars = get_u32(in);
  for (std::uint32_t i = 0; i < n_chars; ++i) v.add_char(get_u32(in));
  const std::uint32_t n_rels = get_u32(in);
  for (std::uint32_t i = 0; i < n_rels; ++i) v.add_relation(get_str(in));
  const std::uint32_t n_labels = get_u32(in);
  for (std::uint32_t i = 0; i < n_labels; ++i) v.add_label(get_str(in));

  Model m(c, std::move(v), seed);
  const std::uint32_t n_tensors = get_u32(in);
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    const std::string name = get_str(in);
    const bool trainable = get_u8(in) != 0;
    const std::uint32_t rank = get_u32(in);
    std::vector<int> shape(rank);
    std::size_t numel = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      shape[d] = static_cast<int>(get_u32(in));
      numel *= static_cast<std::size_t>(shape[d]);
    }
    std::vector<double> values(numel);
    for (std::size_t k = 0; k < numel; ++k) values[k] = get_f64(in);
    m.store.put(name, std::move(shape), std::move(values), trainable);
  }
  return m;
}

}  // namespace dgner
