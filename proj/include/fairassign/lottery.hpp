#pragma once

#include "fairassign/model.hpp"

#include <optional>
#include <vector>

namespace fairassign {

/// Agents pick their favourite unassigned item in priority order.
SimpleAssignment serial_dictatorship(const SimplePriority& priority, const Instance& instance);

/// Random serial dictatorship as the lottery {(serial_dictatorship(sigma_k), rho_k)}.
Lottery rsd(const Instance& instance, const RandomPriority& priority);

/// Perfect matching of a square 0/1 support (support[r][c] != 0) by
/// augmenting paths, rows seeded lowest index first and columns scanned in
/// index order. Returns column per row, or nullopt when none exists.
std::optional<std::vector<int>> perfect_matching(const std::vector<std::vector<char>>& support);

/// Birkhoff-von Neumann decomposition into at most (m-1)^2+1 assignments.
/// A non-square matrix is first padded with m-n dummy rows (filled
/// north-west-corner style, items in index order); dummy rows are dropped
/// from the emitted assignments.
Lottery bvn_decompose(const RandomAssignment& assignment);

}  // namespace fairassign
