#pragma once

#include "oracles.hpp"

#include "rwbandit/harness.hpp"
#include "rwbandit/markov.hpp"

#include <vector>

namespace support {

inline oracle::Rows rows(const rwb::Matrix& m)
{
    oracle::Rows out(m.rows(), std::vector<double>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out[i][j] = m(i, j);
    return out;
}

inline rwb::Matrix matrix(const oracle::Rows& r)
{
    rwb::Matrix m(r.size(), r.front().size());
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r[i].size(); ++j)
            m(i, j) = r[i][j];
    return m;
}

// Asymmetric 3-node chain with a one-way edge.
inline rwb::ChainInstance skew3()
{
    rwb::Matrix m(3, 3);
    m << 0.2, 0.4, 0.0,
         0.1, 0.3, 0.3,
         0.25, 0.0, 0.1;
    return rwb::ChainInstance(m);
}

// Dense 4-node chain with uneven absorption.
inline rwb::ChainInstance dense4()
{
    rwb::Matrix m(4, 4);
    m << 0.10, 0.20, 0.30, 0.15,
         0.05, 0.05, 0.05, 0.05,
         0.30, 0.10, 0.20, 0.10,
         0.20, 0.20, 0.20, 0.20;
    return rwb::ChainInstance(m);
}

inline std::vector<rwb::ChainInstance> test_chains()
{
    return {rwb::fig1_chain(0.0), rwb::fig1_chain(0.1), rwb::exp9_chain(), skew3(), dense4()};
}

}  // namespace support
