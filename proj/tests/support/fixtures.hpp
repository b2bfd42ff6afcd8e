#pragma once

#include <string>

#include "metachain/chain.hpp"
#include "metachain/report.hpp"

namespace testing_support {

inline std::string fixture_path(const std::string& name) { return std::string(METACHAIN_FIXTURE_DIR) + "/" + name; }

inline metachain::Chain load_fixture(const std::string& name) {
  return metachain::build_chain(metachain::parse_model(metachain::read_text_file(fixture_path(name))));
}

inline metachain::ScaledQuantity sq(long p, long q, long op, long oq = 1) {
  return metachain::ScaledQuantity(metachain::Rational(p, q), metachain::Rational(op, oq));
}
inline metachain::ScaledQuantity sq(long c, long o) { return sq(c, 1, o, 1); }

// States of a chain named "1".."n" in fixture files.
inline int st(const metachain::Chain& c, int label) { return c.index(std::to_string(label)); }

}  // namespace testing_support
