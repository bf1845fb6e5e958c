#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

#include "onan/mp.hpp"
#include "onan/quadforms.hpp"
#include "onan/series.hpp"

namespace onan {

class CuspStore;

struct PrecisionPolicy {
  double target_abs_error = 1e-20;
  long initial_bits = 128;
  long max_bits = 4096;
};

class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, double achieved) : std::runtime_error(what), achieved_(achieved) {}
  double achieved_error() const { return achieved_; }

 private:
  double achieved_;
};

class InsufficientOrder : public std::runtime_error {
 public:
  InsufficientOrder(const std::string& what, long required) : std::runtime_error(what), required_(required) {}
  long required_order() const { return required_; }

 private:
  long required_;
};

// tau = x + i sqrt(y2), exact data so the point can be rebuilt at any precision
struct UpperPoint {
  mpq_class x;
  mpq_class y2;

  mp::Complex at(mpfr_prec_t bits) const;
  double imag() const;
  UpperPoint translated(const mpq_class& t) const { return {x + t, y2}; }
  UpperPoint scaled(const mpq_class& s) const { return {x * s, y2 * s * s}; }
  // (a tau + b) / (c tau + d) for an integer matrix of positive determinant
  UpperPoint moved(const Mat2& g) const;
};

struct CMPoint {
  BinaryQuadraticForm form;

  long discriminant() const { return -form.discriminant(); }
  // (-b + i sqrt D) / 2a
  UpperPoint tau() const;
};

struct Evaluation {
  mp::Complex value;
  long bits = 0;
  double error_estimate = 0;
};

struct Index2Coefficients {
  mpq_class c1;
  mpq_class c0;
};

Evaluation evaluate_eta(const UpperPoint& tau, const PrecisionPolicy& policy = {});
Evaluation evaluate_qseries(const QSeries& series, const UpperPoint& tau, const PrecisionPolicy& policy = {});
Evaluation evaluate_hauptmodul(const HauptmodulSpec& spec, const CMPoint& point, const PrecisionPolicy& policy = {},
                               const std::optional<Index2Coefficients>& index2 = std::nullopt,
                               const CuspStore* cusp = nullptr);
Evaluation evaluate_hauptmodul_at(const HauptmodulSpec& spec, const UpperPoint& tau, const PrecisionPolicy& policy = {},
                                  const std::optional<Index2Coefficients>& index2 = std::nullopt,
                                  const CuspStore* cusp = nullptr);

// Coefficient bound |a_n| <= C n^K fitted from the known coefficients.
struct GrowthFit {
  double C = 1;
  int K = 0;
};
GrowthFit fit_growth(const QSeries& series);
// Smallest M with sum_{n >= M} C n^K r^n < eps.
long terms_needed(const GrowthFit& g, double log_r, double log_eps);

}  // namespace onan
