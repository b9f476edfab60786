#include "ug/fanout.hpp"

#include "ug/log.hpp"

#include <atomic>
#include <thread>

namespace ug {

std::vector<ScoreAttempt> score_all(Backend& backend,
                                    const std::vector<ScoringRequest>& requests,
                                    int max_concurrency) {
  std::vector<ScoreAttempt> results(requests.size());
  if (requests.empty()) return results;

  auto worker_body = [&](std::size_t i) {
    try {
      results[i].outcome = backend.score(requests[i]);
    } catch (const std::exception& e) {
      results[i].error = e.what();
      log_warn("candidate " + std::to_string(i) + " left unscored: " + results[i].error);
    }
  };

  if (max_concurrency <= 1) {
    for (std::size_t i = 0; i < requests.size(); ++i) worker_body(i);
    return results;
  }

  std::atomic<std::size_t> next{0};
  const std::size_t n_workers =
      std::min(static_cast<std::size_t>(max_concurrency), requests.size());
  std::vector<std::thread> workers;
  workers.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < requests.size(); i = next.fetch_add(1)) {
        worker_body(i);
      }
    });
  }
  for (auto& t : workers) t.join();
  return results;
}

}  // namespace ug
