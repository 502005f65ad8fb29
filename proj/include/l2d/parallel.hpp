#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace l2d {

inline unsigned resolve_jobs(unsigned jobs)
{
  if (jobs == 0) {
    jobs = std::max(1u, std::thread::hardware_concurrency());
  }
  return jobs;
}

//! Calls body(i) for every i in [0, count) on up to `jobs` threads (0 means
//! hardware concurrency). Tasks are claimed in index order; results must be
//! written to per-index slots so the outcome does not depend on scheduling.
//! The first exception thrown by a task is rethrown after all threads join.
template<class Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body)
{
  jobs = std::min<std::size_t>(resolve_jobs(jobs), std::max<std::size_t>(count, 1));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }

  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) {
          error = std::current_exception();
        }
      }
    }
  };
  {
    std::vector<std::jthread> threads;
    threads.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) {
      threads.emplace_back(worker);
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

} // namespace l2d
