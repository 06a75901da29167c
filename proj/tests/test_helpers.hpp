#ifndef POPMATCH_TEST_HELPERS_HPP
#define POPMATCH_TEST_HELPERS_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "popmatch/core.hpp"

namespace popmatch::testing {

inline std::string read_file(const std::string& name) {
  std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture: " + name);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline Instance load_instance(const std::string& name) {
  return parse_instance(read_file(name));
}

inline Matching load_matching(const std::string& name, const Instance& i) {
  return parse_matching(read_file(name), i);
}

// Builds a matching from (worker index, firm index) pairs.
inline Matching make_matching(const Instance& i,
                              std::initializer_list<Edge> pairs) {
  Matching m = Matching::empty_for(i);
  for (const Edge& e : pairs) m.add(e.worker, e.firm);
  return m;
}

}  // namespace popmatch::testing

#endif  // POPMATCH_TEST_HELPERS_HPP
