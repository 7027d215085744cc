#include "fracinv/toeplitz.hpp"

#include "fracinv/errors.hpp"

#include <stdexcept>
#include <string>

namespace fracinv {

namespace {

std::vector<int> embedding_extents(const std::vector<int>& n) {
    std::vector<int> e(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) e[i] = 2 * n[i];
    return e;
}

} // namespace

ToeplitzOperator::ToeplitzOperator(SpaceGrid grid, SymbolCoefficients sym)
    : grid_(std::move(grid)),
      sym_(std::move(sym)),
      embed_(embedding_extents(grid_.n)),
      plan_(embed_) {
    if (sym_.d != grid_.d || sym_.n != grid_.n)
        throw DimensionError("ToeplitzOperator: symbol tensor does not match the grid");
    dim_ = grid_.total();
    embed_size_ = plan_.size();

    // first column of the circulant embedding: index k_i in [0, 2n_i) maps to
    // coefficient index k_i for k_i < n_i, to k_i - 2n_i for k_i > n_i, and
    // k_i == n_i is the wrap gap (value irrelevant, set to 0)
    std::vector<std::complex<double>> col(static_cast<std::size_t>(embed_size_), 0.0);
    const int d = grid_.d;
    std::vector<int> k(static_cast<std::size_t>(d), 0);
    std::vector<int> l(static_cast<std::size_t>(d), 0);
    for (std::int64_t idx = 0; idx < embed_size_; ++idx) {
        bool gap = false;
        for (int i = 0; i < d; ++i) {
            const int ni = grid_.n[static_cast<std::size_t>(i)];
            const int ki = k[static_cast<std::size_t>(i)];
            if (ki < ni) {
                l[static_cast<std::size_t>(i)] = ki;
            } else if (ki == ni) {
                gap = true;
                break;
            } else {
                l[static_cast<std::size_t>(i)] = ki - 2 * ni;
            }
        }
        if (!gap)
            col[static_cast<std::size_t>(idx)] = sym_.at(l);
        for (int i = d - 1; i >= 0; --i) {
            if (++k[static_cast<std::size_t>(i)] < embed_[static_cast<std::size_t>(i)]) break;
            k[static_cast<std::size_t>(i)] = 0;
        }
    }
    plan_.forward(col.data());
    spectrum_ = std::move(col);
}

ToeplitzOperator::Workspace ToeplitzOperator::make_workspace() const {
    Workspace ws;
    ws.buf.resize(static_cast<std::size_t>(embed_size_));
    return ws;
}

Eigen::VectorXd ToeplitzOperator::apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y(dim_);
    Workspace ws = make_workspace();
    apply(x, y, ws);
    return y;
}

void ToeplitzOperator::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y, Workspace& ws) const {
    if (x.size() != dim_)
        throw DimensionError("ToeplitzOperator::apply: vector length " + std::to_string(x.size()) +
                             " does not match operator dimension " + std::to_string(dim_));
    y.resize(dim_);
    auto& buf = ws.buf;
    buf.assign(static_cast<std::size_t>(embed_size_), std::complex<double>(0.0, 0.0));

    const int d = grid_.d;
    // scatter x into the leading [0, n_i) window of the embedding
    std::vector<int> j(static_cast<std::size_t>(d), 0);
    for (std::int64_t src = 0; src < dim_; ++src) {
        std::int64_t dst = 0;
        for (int i = 0; i < d; ++i)
            dst = dst * embed_[static_cast<std::size_t>(i)] + j[static_cast<std::size_t>(i)];
        buf[static_cast<std::size_t>(dst)] = x[src];
        for (int i = d - 1; i >= 0; --i) {
            if (++j[static_cast<std::size_t>(i)] < grid_.n[static_cast<std::size_t>(i)]) break;
            j[static_cast<std::size_t>(i)] = 0;
        }
    }

    plan_.forward(buf.data());
    for (std::int64_t k = 0; k < embed_size_; ++k)
        buf[static_cast<std::size_t>(k)] *= spectrum_[static_cast<std::size_t>(k)];
    plan_.backward(buf.data());

    const double scale = 1.0 / static_cast<double>(embed_size_);
    std::fill(j.begin(), j.end(), 0);
    for (std::int64_t dst = 0; dst < dim_; ++dst) {
        std::int64_t src = 0;
        for (int i = 0; i < d; ++i)
            src = src * embed_[static_cast<std::size_t>(i)] + j[static_cast<std::size_t>(i)];
        y[dst] = buf[static_cast<std::size_t>(src)].real() * scale;
        for (int i = d - 1; i >= 0; --i) {
            if (++j[static_cast<std::size_t>(i)] < grid_.n[static_cast<std::size_t>(i)]) break;
            j[static_cast<std::size_t>(i)] = 0;
        }
    }
}

Eigen::MatrixXd ToeplitzOperator::dense(std::int64_t cap) const {
    if (dim_ > cap)
        throw ResourceLimitError("ToeplitzOperator::dense: dimension " + std::to_string(dim_) +
                                 " exceeds cap " + std::to_string(cap));
    const int d = grid_.d;
    Eigen::MatrixXd B(dim_, dim_);
    std::vector<int> mi(static_cast<std::size_t>(d), 0);
    std::vector<int> mj(static_cast<std::size_t>(d), 0);
    std::vector<int> diff(static_cast<std::size_t>(d), 0);
    for (std::int64_t r = 0; r < dim_; ++r) {
        std::fill(mj.begin(), mj.end(), 0);
        for (std::int64_t c = 0; c < dim_; ++c) {
            for (int i = 0; i < d; ++i)
                diff[static_cast<std::size_t>(i)] =
                    mi[static_cast<std::size_t>(i)] - mj[static_cast<std::size_t>(i)];
            B(r, c) = sym_.at(diff);
            for (int i = d - 1; i >= 0; --i) {
                if (++mj[static_cast<std::size_t>(i)] < grid_.n[static_cast<std::size_t>(i)]) break;
                mj[static_cast<std::size_t>(i)] = 0;
            }
        }
        for (int i = d - 1; i >= 0; --i) {
            if (++mi[static_cast<std::size_t>(i)] < grid_.n[static_cast<std::size_t>(i)]) break;
            mi[static_cast<std::size_t>(i)] = 0;
        }
    }
    return B;
}

} // namespace fracinv
