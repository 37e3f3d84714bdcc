//
// Copyright 2026 The pptopn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pptopn/dataset.hpp"
#include "pptopn/similarity.hpp"

namespace pptopn {

// In-process simulation of the anonymous random-walk collection protocol:
// the server starts a walk at a uniformly chosen user; each holder draws
// against its private acceptance probability; the first accepting holder
// inserts its item set, the second accepting holder delivers the set to the
// server, and non-accepting holders forward to a uniformly chosen user. Every
// message is recorded so that per-party visibility can be audited exactly.

/// The simulated user population: per-user item sets and private acceptance
/// probabilities.
struct Population {
    std::vector<std::vector<ItemId>> likes;  // I_u, sorted
    std::vector<double> rho;                 // acceptance probability, in (0, 1)
    std::uint32_t n_items = 0;

    std::uint32_t n_users() const { return static_cast<std::uint32_t>(likes.size()); }

    static Population from_dataset(const InteractionDataset& ds, double default_rho);

    void set_rho(UserId u, double value);
    void validate() const;  // throws DomainError on bad rho or empty population
};

enum class TimeoutPolicy {
    kSkipRound,  // record the round as skipped and continue (default)
    kAbort,      // propagate TimeoutError
};

struct WalkConfig {
    std::uint64_t k_rounds = 0;   // |H|: number of protocol rounds
    std::uint64_t seed = 0;       // master seed; round r uses stream (seed, r)
    std::uint32_t max_hops = 1000;
    bool allow_self_forward = true;
    TimeoutPolicy timeout_policy = TimeoutPolicy::kSkipRound;
    unsigned threads = 1;
};

enum class HopAction : std::uint8_t { kInsert, kForward, kDeliver };

struct HopEvent {
    UserId holder;
    HopAction action;

    bool operator==(const HopEvent&) const = default;
};

/// Full audit record of one completed round. `contributor` is bookkeeping
/// for experiments only; observer projections never expose it.
struct RoundOutcome {
    std::uint64_t round_index = 0;
    std::vector<ItemId> contributed_set;  // the inserter's full I_u (may be empty)
    UserId contributor = 0;
    UserId delivering_user = 0;
    std::vector<HopEvent> hop_trace;      // one insert, then forwards, final deliver

    bool operator==(const RoundOutcome&) const = default;
};

struct RoundLog {
    std::uint64_t seed = 0;
    std::uint32_t n_users = 0;
    std::uint32_t n_items = 0;
    std::vector<RoundOutcome> rounds;          // completed rounds, by round index
    std::vector<std::uint64_t> skipped_rounds; // timed-out round indices

    bool operator==(const RoundLog&) const = default;

    /// JSON-lines export, one completed round per line:
    ///   {"round":..,"contributor":..,"deliverer":..,"hops":..,"items":[..]}
    /// The redacted variant omits the contributor field.
    void write_jsonl(const std::string& path, bool redact_contributor) const;
};

/// Executes one round. All randomness is drawn from the stream derived from
/// (cfg.seed, round_index), so rounds are independent and reproducible in any
/// execution order. Throws TimeoutError past cfg.max_hops.
RoundOutcome run_round(const Population& pop, const WalkConfig& cfg,
                       std::uint64_t round_index);

/// Executes cfg.k_rounds rounds and accumulates pair/item co-occurrence
/// counts over delivered sets. Rounds may run concurrently; the result is
/// identical to the serial execution.
std::pair<RoundLog, CoocCounts> run_protocol(const Population& pop, const WalkConfig& cfg);

/// Rebuilds counts from a log; equals the counts returned by run_protocol.
CoocCounts counts_from_log(const RoundLog& log, std::uint32_t n_items);

/// A protocol party: the server or one user.
struct Party {
    static Party server() { return Party{true, 0}; }
    static Party user(UserId u) { return Party{false, u}; }

    bool is_server = false;
    UserId id = 0;
};

/// What the server sees of one round: the delivered set and who handed it in.
struct ServerRoundView {
    std::uint64_t round = 0;
    std::vector<ItemId> delivered_items;
    UserId deliverer = 0;
};

/// One token-holding episode from a user's point of view: where the token
/// came from, the set content that arrived with it, what the user did, and
/// where the token went.
struct UserHopView {
    std::uint64_t round = 0;
    bool from_server = false;   // true for the walk's start user
    UserId from_user = 0;
    bool received_set = false;  // false while no insert has happened yet
    std::vector<ItemId> received_items;
    bool inserted_own_set = false;
    HopAction action = HopAction::kForward;  // the outward action: forward or deliver
    bool to_server = false;     // true when the action delivered
    UserId to_user = 0;
};

/// Projection of the log onto exactly what one party observes. Contributor
/// identity is structurally absent from every view.
struct ObservationRecord {
    Party party;
    std::vector<ServerRoundView> server_rounds;  // filled for the server party
    std::vector<UserHopView> user_hops;          // filled for a user party
};

/// Throws ContractError for an unknown user id.
ObservationRecord observer_view(const RoundLog& log, Party party);

/// Audit histogram: how often each user was the contributor across completed
/// rounds. Throws ContractError on an empty log.
std::vector<std::uint64_t> contributor_distribution(const RoundLog& log);

}  // namespace pptopn
