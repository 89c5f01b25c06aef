#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sociallearn/error.hpp"

namespace sociallearn {

/// Finds x >= 0 with A x = b, or reports that none exists.
///
/// Phase-one simplex on a dense tableau with one artificial variable per row
/// and Bland's rule, so it terminates without cycling. `Number` must be an
/// exact ordered field type; no tolerance is used anywhere.
template <typename Number>
std::optional<std::vector<Number>> find_nonnegative_solution(const std::vector<std::vector<Number>>& A,
                                                             const std::vector<Number>& b) {
  const std::size_t rows = A.size();
  require(b.size() == rows, ErrorCode::InvalidArgument, "rhs size does not match constraint count");
  const std::size_t cols = rows == 0 ? 0 : A.front().size();
  for (const auto& r : A) require(r.size() == cols, ErrorCode::InvalidArgument, "ragged constraint matrix");
  if (rows == 0) return std::vector<Number>(cols, Number(0));

  const Number zero(0);
  const std::size_t width = cols + rows;  // originals then artificials
  std::vector<std::vector<Number>> tab(rows, std::vector<Number>(width, zero));
  std::vector<Number> rhs(rows);
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const bool flip = b[i] < zero;
    for (std::size_t j = 0; j < cols; ++j) tab[i][j] = flip ? zero - A[i][j] : A[i][j];
    rhs[i] = flip ? zero - b[i] : b[i];
    tab[i][cols + i] = Number(1);
    basis[i] = cols + i;
  }

  // Reduced costs of the phase-one objective (sum of artificials).
  std::vector<Number> cost(width, zero);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) cost[j] -= tab[i][j];
  }

  for (;;) {
    std::size_t entering = width;
    for (std::size_t j = 0; j < width; ++j) {
      if (cost[j] < zero) {
        entering = j;
        break;
      }
    }
    if (entering == width) break;

    std::size_t leaving = rows;
    Number best_ratio;
    for (std::size_t i = 0; i < rows; ++i) {
      if (!(tab[i][entering] > zero)) continue;
      Number ratio = rhs[i] / tab[i][entering];
      if (leaving == rows || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    // Phase one is bounded below by zero, so an improving column always has a pivot row.
    require(leaving != rows, ErrorCode::InternalDisagreement, "unbounded phase-one direction");

    const Number pivot = tab[leaving][entering];
    for (auto& v : tab[leaving]) v /= pivot;
    rhs[leaving] /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leaving) continue;
      const Number factor = tab[i][entering];
      if (factor == zero) continue;
      for (std::size_t j = 0; j < width; ++j) tab[i][j] -= factor * tab[leaving][j];
      rhs[i] -= factor * rhs[leaving];
    }
    const Number factor = cost[entering];
    for (std::size_t j = 0; j < width; ++j) cost[j] -= factor * tab[leaving][j];
    basis[leaving] = entering;
  }

  std::vector<Number> x(cols, zero);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] >= cols) {
      if (rhs[i] != zero) return std::nullopt;
    } else {
      x[basis[i]] = rhs[i];
    }
  }
  return x;
}

}  // namespace sociallearn
