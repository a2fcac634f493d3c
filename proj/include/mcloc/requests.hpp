#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mcloc/types.hpp"

namespace mcloc {

enum class RequestStatus { InFlight, Resolved, Failed };

struct RequestRecord {
  RequestId request_id = kNoRequest;
  CodeId code = -1;
  NodeId requester = -1;
  SimTime issued_at = 0.0;
  RequestStatus status = RequestStatus::InFlight;
  SimTime finished_at = 0.0;  // resolution or failure time
  NodeId answered_host = -1;  // host named by the reply
  bool answer_correct = false;
  bool concurrent_jump = false;  // the code jumped while the lookup was in flight
  bool warmup = false;
  std::int64_t message_units = 0;  // filled in from the ledger after the run

  std::optional<SimTime> resolved_at() const {
    if (status != RequestStatus::Resolved) return std::nullopt;
    return finished_at;
  }
};

/// Book-keeping for localization requests. Protocols report the answer when
/// the reply is generated and completion when the requester has it.
class RequestTracker {
 public:
  explicit RequestTracker(SimTime warmup = 0.0) : warmup_(warmup) {}

  RequestId issue(CodeId code, NodeId requester, SimTime t);

  /// Records the host named by the reply, checked against the true host.
  void answer(RequestId id, NodeId claimed_host, NodeId true_host);
  void resolve(RequestId id, SimTime t);
  void fail(RequestId id, SimTime t);
  /// Marks every in-flight request for `code` as having raced a jump.
  void note_jump(CodeId code);

  const RequestRecord& get(RequestId id) const { return records_.at(static_cast<std::size_t>(id)); }
  RequestRecord& get(RequestId id) { return records_.at(static_cast<std::size_t>(id)); }
  const std::vector<RequestRecord>& records() const { return records_; }
  std::vector<RequestRecord>& records() { return records_; }
  SimTime warmup() const { return warmup_; }

 private:
  SimTime warmup_;
  std::vector<RequestRecord> records_;
};

}  // namespace mcloc
