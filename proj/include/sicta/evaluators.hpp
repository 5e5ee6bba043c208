#pragma once

#include <span>

#include "sicta/policy.hpp"
#include "sicta/tree.hpp"

namespace sicta {

/// Slot-level outcome of one collision resolution interval.
struct CriBreakdown {
  int total_slots = 0;
  int collision_slots = 0;
  int singleton_slots = 0;
  int idle_slots = 0;
  int derived_signals = 0;  // group signals obtained by cancellation, no slot
  int sic_recoveries = 0;   // users decoded from a cancelled collision

  friend bool operator==(const CriBreakdown&, const CriBreakdown&) = default;
};

/// Smallest number of leading groups whose cumulative occupancy reaches
/// n - 1. Once those groups are resolved the last user (if any) falls out of
/// the parent signal, so later groups are never visited.
int d_min(std::span<const int> counts, int n);
inline int d_min(const Occupancy& occ, int n) { return d_min(occ.counts, n); }

/// CRI length with SIC and early stop:
///   l_n = 1                                          for n <= 1
///   l_n = 1 + sum_{j <= d_min} l_{I_j} - [d_min = d]  for n >= 2
/// The subtracted slot is the last group's, which is derived from the parent
/// once every sibling is decoded.
int corrected_length(const SplitTree& tree);

/// CRI length as given by the Yu-Giannakis recursion: l_n = sum_j l_{I_j}.
/// Visits every group and is therefore only right for d = 2.
int yg_length(const SplitTree& tree);

/// Classical tree algorithm without SIC: every node costs one slot.
int standard_ta_length(const SplitTree& tree);

/// Replays the receiver slot by slot; see slot_level.cpp for the rules.
CriBreakdown slot_level_cri(const SplitTree& tree);

}  // namespace sicta
