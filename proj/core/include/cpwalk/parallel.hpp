/*
 * Copyright 2026 The cpwalk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cpwalk/errors.hpp"

namespace cpwalk {

struct ReplicaAbort {
    std::size_t replica = 0;
    std::string reason;
};

template <class Row>
struct ReplicaBatch {
    /// Indexed by replica; empty for aborted replicas.
    std::vector<std::optional<Row>> rows;
    std::vector<ReplicaAbort> aborted;

    std::size_t completed() const { return rows.size() - aborted.size(); }
};

/// Thread count from the argument, else CPWALK_THREADS, else 1.
unsigned resolve_threads(unsigned requested);

/// Runs fn(replica) for every replica on a worker pool. Replica-level errors
/// are recorded as aborts; anything else stops the run and is rethrown.
/// Results are stored by replica index, so the outcome does not depend on
/// the number of workers.
template <class Row, class Fn>
ReplicaBatch<Row> run_replicas(std::size_t n, unsigned threads, Fn&& fn) {
    ReplicaBatch<Row> batch;
    batch.rows.resize(n);
    std::vector<std::string> reasons(n);
    std::vector<char> failed(n, 0);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr fatal;
    std::mutex mu;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || stop.load()) return;
            try {
                batch.rows[i].emplace(fn(i));
            } catch (const Error& e) {
                if (is_replica_error(e.code())) {
                    failed[i] = 1;
                    reasons[i] = e.what();
                } else {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!fatal) fatal = std::current_exception();
                    stop = true;
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!fatal) fatal = std::current_exception();
                stop = true;
            }
        }
    };

    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads && t < n; ++t) pool.emplace_back(worker);
    }
    if (fatal) std::rethrow_exception(fatal);
    for (std::size_t i = 0; i < n; ++i)
        if (failed[i]) batch.aborted.push_back({i, reasons[i]});
    return batch;
}

} // namespace cpwalk
