#include "kppca/dataset.hpp"

#include "kppca/csv.hpp"
#include "kppca/errors.hpp"
#include "kppca/mnist.hpp"

namespace kppca {

Eigen::MatrixXd unit_range(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double lo = x.row(i).minCoeff();
    const double span = x.row(i).maxCoeff() - lo;
    if (span > 0.0) {
      out.row(i) = (x.row(i).array() - lo) / span;
    } else {
      out.row(i).setZero();
    }
  }
  return out;
}

Dataset load_dataset(const DatasetHandle& handle) {
  if (handle.limit && *handle.limit < 1) {
    throw Error(Errc::InvalidArgument, "limit must be at least 1");
  }
  Dataset out;
  if (const auto* csv = std::get_if<CsvSource>(&handle.source)) {
    out.x = load_csv(csv->path);
    if (handle.limit && static_cast<Eigen::Index>(*handle.limit) < out.x.cols()) {
      out.x = out.x.leftCols(static_cast<Eigen::Index>(*handle.limit)).eval();
    }
  } else {
    const auto& idx = std::get<IdxSource>(handle.source);
    MnistData data = load_mnist_idx(idx.images, idx.labels, handle.filter, handle.limit);
    out.x = std::move(data.pixels);
    out.labels = std::move(data.labels);
    out.image_rows = data.rows;
    out.image_cols = data.cols;
  }
  if (out.x.cols() == 0) throw Error(Errc::ParseError, "dataset selection is empty");
  if (handle.normalize == Normalize::UnitRange) out.x = unit_range(out.x);
  return out;
}

}  // namespace kppca
