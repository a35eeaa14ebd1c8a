#include "topokernel/svm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "topokernel/error.hpp"
#include "topokernel/text_format.hpp"

namespace topokernel {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_problem(const Matrix& gram, std::span<const int> labels, double C) {
  if (gram.rows() != gram.cols()) throw ArgumentError("train_smo: Gram matrix is not square");
  if (gram.rows() != labels.size()) {
    throw ArgumentError("train_smo: " + std::to_string(labels.size()) + " labels for a " +
                        std::to_string(gram.rows()) + "-point Gram matrix");
  }
  if (!(C > 0.0) || !std::isfinite(C)) throw ArgumentError("train_smo: C must be positive");
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y == 1) {
      pos = true;
    } else if (y == -1) {
      neg = true;
    } else {
      throw ArgumentError("train_smo: labels must be -1 or +1");
    }
  }
  if (!pos || !neg) throw TrainingError("train_smo: both classes must be present");
}

// Dual objective from the gradient G = Q alpha - e.
double objective_from_gradient(std::span<const double> alpha, std::span<const double> grad) {
  double s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) s += alpha[i] * (grad[i] - 1.0);
  return -0.5 * s;
}

}  // namespace

SvmModel train_smo(const Matrix& gram, std::span<const int> labels, double C,
                   const SmoConfig& cfg) {
  check_problem(gram, labels, C);
  if (!(cfg.tolerance > 0.0)) throw ArgumentError("train_smo: tolerance must be positive");
  const std::size_t n = labels.size();
  const std::size_t max_iter = cfg.max_iterations ? cfg.max_iterations : 1000 * n;

  SvmModel model;
  model.C = C;
  model.train_labels.assign(labels.begin(), labels.end());
  model.alpha.assign(n, 0.0);

  if (cfg.verify_psd) {
    const double min_eig = min_eigenvalue(gram);
    if (min_eig < -cfg.psd_tolerance * static_cast<double>(n)) {
      model.warnings.push_back("Gram matrix is not PSD (min eigenvalue " + format_double(min_eig) +
                               "); training proceeds");
    }
  }

  std::vector<double> y(n), diag(n), grad(n, -1.0);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = labels[i];
    diag[i] = gram(i, i);
  }
  auto& alpha = model.alpha;
  const auto upper = [&](std::size_t t) { return alpha[t] >= C; };
  const auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };
  const auto in_up = [&](std::size_t t) { return y[t] > 0 ? !upper(t) : !lower(t); };
  const auto in_low = [&](std::size_t t) { return y[t] > 0 ? !lower(t) : !upper(t); };

  bool indefinite_seen = false;
  std::size_t stalled = 0;
  if (cfg.record_objective) model.objective_trace.push_back(0.0);

  while (true) {
    // i maximizes -y_t G_t over I_up.
    double gmax = -kInf;
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * grad[t] > gmax) {
        gmax = -y[t] * grad[t];
        i = t;
      }
    }
    // j minimizes the second-order objective decrease over I_low.
    double gmax2 = -kInf;
    double best = kInf;
    std::size_t j = n;
    if (i < n) {
      const auto ki = gram.row(i);
      for (std::size_t t = 0; t < n; ++t) {
        if (!in_low(t)) continue;
        const double yg = y[t] * grad[t];
        gmax2 = std::max(gmax2, yg);
        const double grad_diff = gmax + yg;
        if (grad_diff > 0.0) {
          double quad = diag[i] + diag[t] - 2.0 * ki[t];
          if (quad <= 0.0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj < best) {
            best = obj;
            j = t;
          }
        }
      }
    }
    if (i == n || j == n || gmax + gmax2 < cfg.tolerance) {
      model.converged = true;
      break;
    }
    if (model.iterations >= max_iter) {
      model.warnings.push_back("iteration cap reached before convergence");
      break;
    }
    ++model.iterations;

    const auto ki = gram.row(i);
    const auto kj = gram.row(j);
    double quad = diag[i] + diag[j] - 2.0 * ki[j];
    if (quad < -1e-10 * std::max(1.0, diag[i] + diag[j]) && !indefinite_seen) {
      indefinite_seen = true;
      model.warnings.push_back("indefinite kernel pair encountered; curvature clamped");
    }
    if (quad <= 0.0) quad = kTau;

    const double old_ai = alpha[i], old_aj = alpha[j];
    if (y[i] != y[j]) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai, daj = alpha[j] - old_aj;
    if (dai == 0.0 && daj == 0.0) {
      if (++stalled >= cfg.max_passes) {
        model.warnings.push_back("no progress in " + std::to_string(stalled) + " iterations");
        break;
      }
    } else {
      stalled = 0;
      // G_t += Q_ti dai + Q_tj daj with Q_ts = y_t y_s K_ts.
      const double ci = y[i] * dai, cj = y[j] * daj;
      for (std::size_t t = 0; t < n; ++t) grad[t] += y[t] * (ki[t] * ci + kj[t] * cj);
    }
    if (cfg.record_objective) model.objective_trace.push_back(objective_from_gradient(alpha, grad));
  }

  // Bias: mean over free vectors of -y_i G_i, else midpoint of the feasible
  // interval implied by the bounded vectors.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lb = -kInf, ub = kInf;
  for (std::size_t t = 0; t < n; ++t) {
    const double r = -y[t] * grad[t];
    if (!upper(t) && !lower(t)) {
      free_sum += r;
      ++free_count;
    } else if (in_up(t)) {
      lb = std::max(lb, r);
    } else {
      ub = std::min(ub, r);
    }
  }
  if (free_count > 0) {
    model.bias = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(lb) && std::isfinite(ub)) {
    model.bias = 0.5 * (lb + ub);
  } else {
    model.bias = std::isfinite(lb) ? lb : (std::isfinite(ub) ? ub : 0.0);
  }

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) model.support_indices.push_back(t);
  }
  return model;
}

SvmModel train_smo(const GramMatrix& gram, std::span<const int> labels, double C,
                   const SmoConfig& cfg) {
  return train_smo(gram.values, labels, C, cfg);
}

double dual_objective(std::span<const double> alpha, const Matrix& gram,
                      std::span<const int> labels) {
  const std::size_t n = alpha.size();
  if (labels.size() != n || gram.rows() != n || gram.cols() != n) {
    throw ArgumentError("dual_objective: size mismatch");
  }
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += alpha[i];
    if (alpha[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += alpha[j] * labels[j] * gram(i, j);
    quad += alpha[i] * labels[i] * row;
  }
  return linear - 0.5 * quad;
}

double dual_objective(const SvmModel& model, const Matrix& gram, std::span<const int> labels) {
  return dual_objective(model.alpha, gram, labels);
}

double decision_value(const SvmModel& model, std::span<const double> kernel_row) {
  if (kernel_row.size() != model.alpha.size()) {
    throw ArgumentError("decision_value: kernel row has " + std::to_string(kernel_row.size()) +
                        " entries, model has " + std::to_string(model.alpha.size()));
  }
  double sum = model.bias;
  for (std::size_t i : model.support_indices) {
    sum += model.alpha[i] * model.train_labels[i] * kernel_row[i];
  }
  return sum;
}

int predict_label(const SvmModel& model, std::span<const double> kernel_row) {
  return decision_value(model, kernel_row) >= 0.0 ? 1 : -1;
}

std::vector<int> predict(const SvmModel& model, const Matrix& kernel_rows) {
  std::vector<int> out(kernel_rows.rows());
  for (std::size_t r = 0; r < kernel_rows.rows(); ++r) out[r] = predict_label(model, kernel_rows.row(r));
  return out;
}

double max_kkt_violation(const SvmModel& model, const Matrix& gram) {
  double worst = 0.0;
  for (std::size_t i = 0; i < model.alpha.size(); ++i) {
    const double margin = model.train_labels[i] * decision_value(model, gram.row(i));
    double v;
    if (model.alpha[i] <= 0.0) {
      v = std::max(0.0, 1.0 - margin);
    } else if (model.alpha[i] >= model.C) {
      v = std::max(0.0, margin - 1.0);
    } else {
      v = std::abs(margin - 1.0);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

void save_model(std::ostream& out, const SvmModel& model) {
  out << "svm-model v1\n";
  out << "C " << format_double(model.C) << "\n";
  out << "bias " << format_double(model.bias) << "\n";
  out << "n " << model.alpha.size() << "\n";
  out << "labels";
  for (int y : model.train_labels) out << ' ' << y;
  out << "\nalpha";
  for (double a : model.alpha) out << ' ' << format_double(a);
  out << "\nsupport";
  for (std::size_t i : model.support_indices) out << ' ' << i;
  out << "\n";
}

namespace {

std::istringstream expect_line(std::istream& in, std::size_t& line_no, const std::string& key) {
  std::string line;
  ++line_no;
  if (!std::getline(in, line)) throw FormatError("svm-model", line_no, "missing '" + key + "' line");
  std::istringstream fields(line);
  std::string head;
  fields >> head;
  if (head != key) throw FormatError("svm-model", line_no, "expected '" + key + "', got '" + head + "'");
  return fields;
}

}  // namespace

SvmModel load_model(std::istream& in) {
  std::size_t line_no = 0;
  std::string header;
  ++line_no;
  if (!std::getline(in, header) || header != "svm-model v1") {
    throw FormatError("svm-model", line_no, "missing 'svm-model v1' header");
  }
  SvmModel model;
  std::size_t n = 0;
  if (!(expect_line(in, line_no, "C") >> model.C)) throw FormatError("svm-model", line_no, "bad C");
  if (!(expect_line(in, line_no, "bias") >> model.bias)) throw FormatError("svm-model", line_no, "bad bias");
  if (!(expect_line(in, line_no, "n") >> n)) throw FormatError("svm-model", line_no, "bad n");
  auto labels = expect_line(in, line_no, "labels");
  for (int y; labels >> y;) model.train_labels.push_back(y);
  if (model.train_labels.size() != n) throw FormatError("svm-model", line_no, "label count != n");
  auto alphas = expect_line(in, line_no, "alpha");
  for (std::string tok; alphas >> tok;) {
    try {
      model.alpha.push_back(parse_real(tok));
    } catch (const ArgumentError& e) {
      throw FormatError("svm-model", line_no, e.what());
    }
  }
  if (model.alpha.size() != n) throw FormatError("svm-model", line_no, "alpha count != n");
  auto support = expect_line(in, line_no, "support");
  for (std::size_t i; support >> i;) {
    if (i >= n) throw FormatError("svm-model", line_no, "support index out of range");
    model.support_indices.push_back(i);
  }
  model.converged = true;
  return model;
}

}  // namespace topokernel
