#pragma once

#include "dyadlab/support.hpp"
#include "dyadlab/tpm.hpp"

namespace fixture {

/// The L=22, T=4096 table and its one-dimensional support, built once per binary.
inline const dyadlab::tpm::ComplexityTable& table22() {
    static const auto t = dyadlab::tpm::build_table(22, 4096);
    return t;
}

inline const dyadlab::measures::Support& support22() {
    static const auto s = dyadlab::measures::Support::from_table(table22(), 1);
    return s;
}

}  // namespace fixture
