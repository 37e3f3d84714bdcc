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

#include "pptopn/walksim.hpp"

#include <fstream>
#include <variant>

#include <nlohmann/json.hpp>

#include "pptopn/errors.hpp"
#include "pptopn/parallel.hpp"
#include "pptopn/rng.hpp"

namespace pptopn {

Population Population::from_dataset(const InteractionDataset& ds, double default_rho) {
    Population pop;
    pop.likes = ds.likes;
    pop.rho.assign(ds.n_users(), default_rho);
    pop.n_items = ds.n_items();
    pop.validate();
    return pop;
}

void Population::set_rho(UserId u, double value) {
    if (!(value > 0.0 && value < 1.0)) {
        throw DomainError("Population: rho must be strictly inside (0, 1)");
    }
    rho.at(u) = value;
}

void Population::validate() const {
    if (likes.empty()) throw DomainError("Population: no users");
    if (rho.size() != likes.size()) {
        throw DomainError("Population: rho size does not match user count");
    }
    for (double r : rho) {
        if (!(r > 0.0 && r < 1.0)) {
            throw DomainError("Population: rho must be strictly inside (0, 1)");
        }
    }
}

RoundOutcome run_round(const Population& pop, const WalkConfig& cfg,
                       std::uint64_t round_index) {
    const std::uint32_t n = pop.n_users();
    RngStream rng(keyed_hash(cfg.seed, round_index));

    RoundOutcome out;
    out.round_index = round_index;

    // Server picks the walk's start user uniformly.
    auto holder = static_cast<UserId>(rng.next_below(n));
    bool inserted = false;
    std::uint32_t hops = 0;

    while (true) {
        if (++hops > cfg.max_hops) throw TimeoutError(round_index, cfg.max_hops);
        if (rng.next_unit() < pop.rho[holder]) {
            if (!inserted) {
                // First accept: the holder contributes its item set and keeps
                // drawing in place.
                inserted = true;
                out.contributor = holder;
                out.contributed_set = pop.likes[holder];
                out.hop_trace.push_back({holder, HopAction::kInsert});
            } else {
                out.delivering_user = holder;
                out.hop_trace.push_back({holder, HopAction::kDeliver});
                return out;
            }
        } else {
            out.hop_trace.push_back({holder, HopAction::kForward});
            if (cfg.allow_self_forward) {
                holder = static_cast<UserId>(rng.next_below(n));
            } else {
                auto next = static_cast<UserId>(rng.next_below(n - 1));
                holder = next >= holder ? next + 1 : next;
            }
        }
    }
}

std::pair<RoundLog, CoocCounts> run_protocol(const Population& pop, const WalkConfig& cfg) {
    pop.validate();
    if (cfg.k_rounds < 1) throw DomainError("run_protocol: k_rounds must be >= 1");
    if (cfg.max_hops < 1) throw DomainError("run_protocol: max_hops must be >= 1");
    if (!cfg.allow_self_forward && pop.n_users() < 2) {
        throw DomainError("run_protocol: forwarding needs a second user when self is excluded");
    }

    std::vector<std::variant<std::monostate, RoundOutcome, TimeoutError>> slots(cfg.k_rounds);
    run_partitioned(cfg.k_rounds, cfg.threads,
                    [&](std::size_t begin, std::size_t end, unsigned) {
                        for (std::size_t r = begin; r < end; ++r) {
                            try {
                                slots[r] = run_round(pop, cfg, r);
                            } catch (const TimeoutError& e) {
                                slots[r] = e;
                            }
                        }
                    });

    RoundLog log;
    log.seed = cfg.seed;
    log.n_users = pop.n_users();
    log.n_items = pop.n_items;
    log.rounds.reserve(cfg.k_rounds);
    CoocCounts counts(pop.n_items);
    for (auto& slot : slots) {
        if (auto* outcome = std::get_if<RoundOutcome>(&slot)) {
            counts.add_round(outcome->contributed_set);
            log.rounds.push_back(std::move(*outcome));
        } else {
            const auto& err = std::get<TimeoutError>(slot);
            if (cfg.timeout_policy == TimeoutPolicy::kAbort) throw err;
            log.skipped_rounds.push_back(err.round());
        }
    }
    return {std::move(log), std::move(counts)};
}

CoocCounts counts_from_log(const RoundLog& log, std::uint32_t n_items) {
    CoocCounts counts(n_items);
    for (const auto& round : log.rounds) counts.add_round(round.contributed_set);
    return counts;
}

void RoundLog::write_jsonl(const std::string& path, bool redact_contributor) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path, 0, "cannot open file for writing");
    for (const auto& round : rounds) {
        nlohmann::json line;
        line["round"] = round.round_index;
        if (!redact_contributor) line["contributor"] = round.contributor;
        line["deliverer"] = round.delivering_user;
        line["hops"] = round.hop_trace.size();
        line["items"] = round.contributed_set;
        out << line.dump() << '\n';
    }
    if (!out) throw ParseError(path, 0, "write failed");
}

ObservationRecord observer_view(const RoundLog& log, Party party) {
    if (!party.is_server && party.id >= log.n_users) {
        throw ContractError("observer_view: unknown user id");
    }
    ObservationRecord record;
    record.party = party;
    if (party.is_server) {
        record.server_rounds.reserve(log.rounds.size());
        for (const auto& round : log.rounds) {
            record.server_rounds.push_back(
                {round.round_index, round.contributed_set, round.delivering_user});
        }
        return record;
    }
    for (const auto& round : log.rounds) {
        // Replay the walk as holder episodes. An episode is one holder's
        // turn: an optional insert event (the holder keeps drawing in place)
        // followed by the outward action that moved the token on.
        const auto& trace = round.hop_trace;
        bool carried = false;
        bool from_server = true;  // the start user is contacted by the server
        UserId from_user = 0;
        std::size_t t = 0;
        while (t < trace.size()) {
            std::size_t e = t;
            while (trace[e].action == HopAction::kInsert) ++e;  // deliver/forward ends the turn
            if (trace[t].holder == party.id) {
                UserHopView view;
                view.round = round.round_index;
                view.from_server = from_server;
                view.from_user = from_user;
                view.received_set = carried;
                if (carried) view.received_items = round.contributed_set;
                view.inserted_own_set = e > t;
                view.action = trace[e].action;
                if (view.action == HopAction::kDeliver) {
                    view.to_server = true;
                } else if (e + 1 < trace.size()) {
                    view.to_user = trace[e + 1].holder;
                }
                record.user_hops.push_back(std::move(view));
            }
            if (e > t) carried = true;
            if (trace[e].action == HopAction::kDeliver) break;
            from_server = false;
            from_user = trace[e].holder;
            t = e + 1;
        }
    }
    return record;
}

std::vector<std::uint64_t> contributor_distribution(const RoundLog& log) {
    if (log.rounds.empty()) throw ContractError("contributor_distribution: empty log");
    std::vector<std::uint64_t> counts(log.n_users, 0);
    for (const auto& round : log.rounds) ++counts.at(round.contributor);
    return counts;
}

}  // namespace pptopn
