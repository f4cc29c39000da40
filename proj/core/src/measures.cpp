#include "macgan/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "macgan/decompositions.hpp"

namespace macgan {

FeatureBatch::FeatureBatch(Matrix z, SampleSource src, std::optional<std::vector<int>> lbl)
    : data(std::move(z)), source(src), labels(std::move(lbl)) {
  if (data.rows() == 0 || data.cols() == 0) {
    throw DimensionError("FeatureBatch: need d >= 1 and n >= 1");
  }
  if (labels) {
    if (labels->size() != data.cols()) {
      throw DimensionError("FeatureBatch: " + std::to_string(labels->size()) +
                           " labels for " + std::to_string(data.cols()) + " samples");
    }
    for (int l : *labels) {
      if (l < 0) throw InputError("FeatureBatch: negative class label");
    }
  }
}

namespace {

void require_relation(const Matrix& z, const RelationMatrix& c, const char* what) {
  if (c.data.rows() != z.cols() || c.data.cols() != z.cols()) {
    throw DimensionError(std::string(what) + ": relation matrix is " +
                         std::to_string(c.data.rows()) + "x" + std::to_string(c.data.cols()) +
                         " but batch has " + std::to_string(z.cols()) + " samples");
  }
}

bool is_symmetric(const Matrix& c) {
  for (std::size_t r = 0; r < c.rows(); ++r) {
    for (std::size_t k = r + 1; k < c.cols(); ++k) {
      if (c(r, k) != c(k, r)) return false;
    }
  }
  return true;
}

// tr(Z Z^T) - tr(Z C Z^T), and optionally its gradient 2Z - Z (C + C^T).
double trace_difference(const Matrix& z, const Matrix& c, Matrix* grad = nullptr) {
  const Matrix zc = matmul(z, c);
  const double value = frobenius_sq(z) - frobenius_dot(z, zc);
  if (grad) {
    if (is_symmetric(c)) {
      *grad = zc;
      *grad *= -2.0;
    } else {
      *grad = matmul(z, c.transposed());
      *grad *= -1.0;
      grad->add_scaled(zc, -1.0);
    }
    grad->add_scaled(z, 2.0);
  }
  return value;
}

struct GramLogdet {
  double logdet = 0.0;
  Matrix solved;  // (I + a W W^T)^-1 W, d x k
};

// log det(I + a W W^T) on whichever Gram side is smaller.
GramLogdet logdet_gram(const Matrix& w, double a, bool want_solve) {
  GramLogdet out;
  const std::size_t d = w.rows();
  const std::size_t k = w.cols();
  if (k == 1) {
    double sq = 0.0;
    for (std::size_t r = 0; r < d; ++r) sq += w(r, 0) * w(r, 0);
    const double denom = 1.0 + a * sq;
    if (!(denom > 0.0) || !std::isfinite(denom)) {
      throw NumericalError("logdet_gram: 1 + a|w|^2 is not positive and finite");
    }
    out.logdet = std::log(denom);
    if (want_solve) {
      out.solved = w;
      out.solved *= 1.0 / denom;
    }
  } else if (k <= d) {
    Matrix m = matmul_tn(w, w);
    m *= a;
    for (std::size_t i = 0; i < k; ++i) m(i, i) += 1.0;
    const Matrix lower = cholesky(m);
    for (std::size_t i = 0; i < k; ++i) out.logdet += 2.0 * std::log(lower(i, i));
    if (want_solve) out.solved = cholesky_solve(lower, w.transposed()).transposed();
  } else {
    Matrix m = matmul_nt(w, w);
    m *= a;
    for (std::size_t i = 0; i < d; ++i) m(i, i) += 1.0;
    const Matrix lower = cholesky(m);
    for (std::size_t i = 0; i < d; ++i) out.logdet += 2.0 * std::log(lower(i, i));
    if (want_solve) out.solved = cholesky_solve(lower, w);
  }
  return out;
}

struct ClassColumns {
  std::vector<std::size_t> index;
  std::vector<double> sqrt_weight;
  double trace = 0.0;
};

ClassColumns class_columns(const Matrix& rows, std::size_t j) {
  ClassColumns cc;
  const auto row = rows.row(j);
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] < 0.0 || !std::isfinite(row[i])) {
      throw InputError("membership weights must be finite and non-negative");
    }
    if (row[i] > 0.0) {
      cc.index.push_back(i);
      cc.sqrt_weight.push_back(std::sqrt(row[i]));
      cc.trace += row[i];
    }
  }
  if (!(cc.trace > 0.0)) {
    throw InputError("membership " + std::to_string(j) + " has zero trace");
  }
  return cc;
}

Matrix gather_scaled(const Matrix& z, const ClassColumns& cc) {
  Matrix w(z.rows(), cc.index.size());
  for (std::size_t r = 0; r < z.rows(); ++r) {
    for (std::size_t c = 0; c < cc.index.size(); ++c) {
      w(r, c) = z(r, cc.index[c]) * cc.sqrt_weight[c];
    }
  }
  return w;
}

void require_membership_rows(const Matrix& z, const Matrix& rows) {
  if (rows.cols() != z.cols()) {
    throw DimensionError("membership rows cover " + std::to_string(rows.cols()) +
                         " samples but batch has " + std::to_string(z.cols()));
  }
}

double partitioned_value_and_grad(const Matrix& z, const Matrix& rows, double eps, Matrix* grad) {
  require_membership_rows(z, rows);
  const RateParams params{eps};
  const std::size_t d = z.rows();
  const std::size_t n = z.cols();
  const double alpha = params.alpha(d, n);

  GramLogdet expansion = logdet_gram(z, alpha, grad != nullptr);
  double value = 0.5 * expansion.logdet;
  if (grad) {
    *grad = std::move(expansion.solved);
    *grad *= alpha;
  }
  for (std::size_t j = 0; j < rows.rows(); ++j) {
    const ClassColumns cc = class_columns(rows, j);
    const double alpha_j = params.alpha_class(d, cc.trace);
    const double gamma_j = RateParams::gamma_class(cc.trace, n);
    const Matrix w = gather_scaled(z, cc);
    const GramLogdet term = logdet_gram(w, alpha_j, grad != nullptr);
    value -= 0.5 * gamma_j * term.logdet;
    if (grad) {
      const double scale = gamma_j * alpha_j;
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < cc.index.size(); ++c) {
          (*grad)(r, cc.index[c]) -= scale * term.solved(r, c) * cc.sqrt_weight[c];
        }
      }
    }
  }
  return value;
}

}  // namespace

double l_tr(const FeatureBatch& z, const RelationMatrix& c) {
  require_relation(z.data, c, "l_tr");
  const double n = static_cast<double>(z.count());
  return trace_difference(z.data, c.data) / (2.0 * n);
}

Matrix l_tr_grad(const FeatureBatch& z, const RelationMatrix& c) {
  require_relation(z.data, c, "l_tr_grad");
  const double n = static_cast<double>(z.count());
  Matrix g;
  trace_difference(z.data, c.data, &g);
  g *= 1.0 / (2.0 * n);
  return g;
}

namespace {

void require_mac_shapes(const FeatureBatch& z_real, const FeatureBatch& z_gen,
                        const RelationMatrix& c, const RelationMatrix& c_prime,
                        const RelationMatrix& c_joint) {
  if (z_real.dim() != z_gen.dim()) {
    throw DimensionError("l_mac: real and generated features differ in dimension");
  }
  require_relation(z_real.data, c, "l_mac (C)");
  require_relation(z_gen.data, c_prime, "l_mac (C')");
  const std::size_t total = z_real.count() + z_gen.count();
  if (c_joint.data.rows() != total || c_joint.data.cols() != total) {
    throw DimensionError("l_mac: joint relation matrix must be " + std::to_string(total) +
                         "x" + std::to_string(total));
  }
}

}  // namespace

double l_mac(const FeatureBatch& z_real, const FeatureBatch& z_gen, const RelationMatrix& c,
             const RelationMatrix& c_prime, const RelationMatrix& c_joint) {
  require_mac_shapes(z_real, z_gen, c, c_prime, c_joint);
  const double total = static_cast<double>(z_real.count() + z_gen.count());
  const Matrix joint = hcat(z_real.data, z_gen.data);
  const double joint_term = trace_difference(joint, c_joint.data) / total;
  return joint_term - 0.5 * l_tr(z_real, c) - 0.5 * l_tr(z_gen, c_prime);
}

MacResult l_mac_grads(const FeatureBatch& z_real, const FeatureBatch& z_gen,
                      const RelationMatrix& c, const RelationMatrix& c_prime,
                      const RelationMatrix& c_joint) {
  require_mac_shapes(z_real, z_gen, c, c_prime, c_joint);
  const std::size_t n = z_real.count();
  const std::size_t n_gen = z_gen.count();
  const double total = static_cast<double>(n + n_gen);

  const Matrix joint = hcat(z_real.data, z_gen.data);
  Matrix joint_grad, g_real, g_gen;
  const double rn = static_cast<double>(n);
  const double gn = static_cast<double>(n_gen);
  MacResult out;
  out.value = trace_difference(joint, c_joint.data, &joint_grad) / total -
              0.5 * trace_difference(z_real.data, c.data, &g_real) / (2.0 * rn) -
              0.5 * trace_difference(z_gen.data, c_prime.data, &g_gen) / (2.0 * gn);
  joint_grad *= 1.0 / total;
  out.grad_real = joint_grad.col_block(0, n);
  out.grad_gen = joint_grad.col_block(n, n_gen);
  out.grad_real.add_scaled(g_real, -0.5 / (2.0 * rn));
  out.grad_gen.add_scaled(g_gen, -0.5 / (2.0 * gn));
  return out;
}

double RateParams::alpha(std::size_t d, std::size_t n) const {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  return static_cast<double>(d) / (static_cast<double>(n) * epsilon * epsilon);
}

double RateParams::alpha_class(std::size_t d, double class_trace) const {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (!(class_trace > 0.0)) throw InputError("class membership trace must be positive");
  return static_cast<double>(d) / (class_trace * epsilon * epsilon);
}

double RateParams::gamma_class(double class_trace, std::size_t n) {
  return class_trace / static_cast<double>(n);
}

double coding_rate(const FeatureBatch& z, double eps, RateScale scale) {
  const RateParams params{eps};
  const double alpha = params.alpha(z.dim(), z.count());
  const double ld = logdet_gram(z.data, alpha, false).logdet;
  if (scale == RateScale::BitCount) {
    return 0.5 * static_cast<double>(z.count() + z.dim()) * ld;
  }
  return 0.5 * ld;
}

Matrix coding_rate_grad(const FeatureBatch& z, double eps) {
  const RateParams params{eps};
  const double alpha = params.alpha(z.dim(), z.count());
  Matrix g = logdet_gram(z.data, alpha, true).solved;
  g *= alpha;
  return g;
}

Matrix membership_rows_from_labels(std::span<const int> labels) {
  std::map<int, std::size_t> slot;
  for (int l : labels) slot.emplace(l, 0);
  std::size_t next = 0;
  for (auto& [label, index] : slot) index = next++;
  Matrix rows(slot.size(), labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) rows(slot.at(labels[i]), i) = 1.0;
  return rows;
}

Matrix singleton_membership_rows(std::size_t n) { return Matrix::identity(n); }

std::vector<Matrix> membership_matrices(const Matrix& membership_rows) {
  std::vector<Matrix> out;
  out.reserve(membership_rows.rows());
  for (std::size_t j = 0; j < membership_rows.rows(); ++j) {
    Matrix c(membership_rows.cols(), membership_rows.cols());
    for (std::size_t i = 0; i < membership_rows.cols(); ++i) c(i, i) = membership_rows(j, i);
    out.push_back(std::move(c));
  }
  return out;
}

double coding_rate_decomposed(const FeatureBatch& z, std::span<const Matrix> memberships,
                              double eps) {
  const std::size_t n = z.count();
  Matrix rows(memberships.size(), n);
  for (std::size_t j = 0; j < memberships.size(); ++j) {
    const Matrix& c = memberships[j];
    if (c.rows() != n || c.cols() != n) {
      throw DimensionError("coding_rate_decomposed: membership " + std::to_string(j) +
                           " is not " + std::to_string(n) + "x" + std::to_string(n));
    }
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t col = 0; col < n; ++col) {
        if (r != col && c(r, col) != 0.0) {
          throw InputError("coding_rate_decomposed: membership " + std::to_string(j) +
                           " is not diagonal");
        }
      }
      rows(j, r) = c(r, r);
    }
  }
  return coding_rate_partitioned(z.data, rows, eps);
}

double coding_rate_partitioned(const Matrix& z, const Matrix& membership_rows, double eps) {
  return partitioned_value_and_grad(z, membership_rows, eps, nullptr);
}

Matrix coding_rate_partitioned_grad(const Matrix& z, const Matrix& membership_rows, double eps) {
  Matrix grad;
  partitioned_value_and_grad(z, membership_rows, eps, &grad);
  return grad;
}

MacResult l_mac_logdet(const Matrix& z_real, const Matrix& z_gen, const Matrix& rows_real,
                       const Matrix& rows_gen, const Matrix& rows_joint, double eps) {
  if (z_real.rows() != z_gen.rows()) {
    throw DimensionError("l_mac_logdet: real and generated features differ in dimension");
  }
  const Matrix joint = hcat(z_real, z_gen);
  Matrix g_joint, g_real, g_gen;
  MacResult out;
  out.value = partitioned_value_and_grad(joint, rows_joint, eps, &g_joint) -
              0.5 * partitioned_value_and_grad(z_real, rows_real, eps, &g_real) -
              0.5 * partitioned_value_and_grad(z_gen, rows_gen, eps, &g_gen);
  out.grad_real = g_joint.col_block(0, z_real.cols());
  out.grad_gen = g_joint.col_block(z_real.cols(), z_gen.cols());
  out.grad_real.add_scaled(g_real, -0.5);
  out.grad_gen.add_scaled(g_gen, -0.5);
  return out;
}

double taylor_gap(const FeatureBatch& z, std::optional<double> alpha) {
  const double a = alpha.value_or(1.0 / static_cast<double>(z.count()));
  const double trace_form = 0.5 * a * frobenius_sq(z.data);
  const double logdet_form = 0.5 * logdet_gram(z.data, a, false).logdet;
  return std::abs(trace_form - logdet_form);
}

double half_logdet_gram(const Matrix& w, double a) { return 0.5 * logdet_gram(w, a, false).logdet; }

}  // namespace macgan
