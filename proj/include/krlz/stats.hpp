#pragma once

#include <algorithm>
#include <cstddef>

namespace krlz {

// Instrumentation counters filled by the matchers when a pointer is passed.
// All peaks are maxima over the run; the *_violations fields count breaches
// of properties that hold whenever fingerprints produce no false positive.
struct MatchStats {
  std::size_t peak_pending = 0;          // pending requests in one sweep
  std::size_t peak_pending_per_pattern = 0;
  std::size_t requests_created = 0;
  std::size_t max_requests_per_pattern = 0;
  std::size_t spacing_violations = 0;    // close prefix occurrences that periodicity forbids
  std::size_t extension_overlaps = 0;    // naive extension with another request pending
  std::size_t sweeps = 0;                // passes over the text
  std::size_t windows = 0;               // window positions visited
  std::size_t peak_index_entries = 0;    // fingerprint index entries alive at once
  std::size_t peak_block_nodes = 0;      // largest block suffix tree
  std::size_t twin_operations = 0;

  void note_pending(std::size_t pending) { peak_pending = std::max(peak_pending, pending); }
  void note_index(std::size_t entries) { peak_index_entries = std::max(peak_index_entries, entries); }

  void merge(const MatchStats& o) {
    peak_pending = std::max(peak_pending, o.peak_pending);
    peak_pending_per_pattern = std::max(peak_pending_per_pattern, o.peak_pending_per_pattern);
    requests_created += o.requests_created;
    max_requests_per_pattern = std::max(max_requests_per_pattern, o.max_requests_per_pattern);
    spacing_violations += o.spacing_violations;
    extension_overlaps += o.extension_overlaps;
    sweeps += o.sweeps;
    windows += o.windows;
    peak_index_entries = std::max(peak_index_entries, o.peak_index_entries);
    peak_block_nodes = std::max(peak_block_nodes, o.peak_block_nodes);
    twin_operations += o.twin_operations;
  }
};

}  // namespace krlz
