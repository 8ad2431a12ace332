#include "dgner/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "dgner/errors.hpp"

namespace dgner {

namespace {

std::string ascii_lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_uint(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

const std::vector<double>* EmbeddingTable::find(const std::string& token) const {
  auto it = vectors.find(token);
  if (it != vectors.end()) return &it->second;
  it = vectors.find(ascii_lower(token));
  if (it != vectors.end()) return &it->second;
  return nullptr;
}

EmbeddingTable load_embeddings(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path);
  EmbeddingTable table;
  table.dim = dim;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<std::string> fields;
    std::string f;
    while (ss >> f) fields.push_back(f);
    if (first) {
      first = false;
      if (fields.size() == 2 && is_uint(fields[0]) && is_uint(fields[1])) {
        if (std::stoi(fields[1]) != dim)
          throw DataError(path + " line 1: header dimension " + fields[1] +
                          " does not match expected " + std::to_string(dim));
        continue;
      }
    }
    if (static_cast<int>(fields.size()) != dim + 1)
      throw DataError(path + " line " + std::to_string(line_no) + ": token '" +
                      (fields.empty() ? "" : fields[0]) + "' has " +
                      std::to_string(static_cast<int>(fields.size()) - 1) +
                      " values, expected " + std::to_string(dim));
    std::vector<double> vec(dim);
    for (int i = 0; i < dim; ++i) {
      try {
        vec[i] = std::stod(fields[i + 1]);
      } catch (const std::exception&) {
        throw DataError(path + " line " + std::to_string(line_no) +
                        ": bad float '" + fields[i + 1] + "'");
      }
    }
    auto [it, inserted] = table.vectors.emplace(fields[0], std::move(vec));
    (void)it;
    if (!inserted) ++table.duplicate_count;
  }
  return table;
}

ContextVectors load_context_vectors(const std::string& path,
                                    const std::vector<Sentence>& corpus) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open context-vector file: " + path);
  std::vector<std::vector<std::vector<double>>> blocks;
  std::vector<std::vector<double>> block;
  std::string line;
  auto flush = [&] {
    if (!block.empty()) {
      blocks.push_back(std::move(block));
      block.clear();
    }
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    std::istringstream ss(line);
    std::vector<double> vec;
    double x;
    while (ss >> x) vec.push_back(x);
    if (vec.empty() || !ss.eof())
      throw DataError(path + ": bad vector line in block " +
                      std::to_string(blocks.size() + 1));
    block.push_back(std::move(vec));
  }
  flush();

  if (blocks.size() != corpus.size())
    throw DataError(path + ": " + std::to_string(blocks.size()) +
                    " vector blocks for " + std::to_string(corpus.size()) +
                    " sentences");
  ContextVectors cv;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (static_cast<int>(blocks[k].size()) != corpus[k].n())
      throw DataError(path + ": sentence " + std::to_string(k + 1) + " has " +
                      std::to_string(blocks[k].size()) + " vectors for " +
                      std::to_string(corpus[k].n()) + " tokens");
    for (const auto& vec : blocks[k]) {
      if (cv.dim == 0) cv.dim = static_cast<int>(vec.size());
      if (static_cast<int>(vec.size()) != cv.dim)
        throw DataError(path + ": sentence " + std::to_string(k + 1) +
                        " mixes vector dimensions");
    }
  }
  cv.sentences = std::move(blocks);
  return cv;
}

}  // namespace dgner
