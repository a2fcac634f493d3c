#include "mcloc/requests.hpp"

namespace mcloc {

RequestId RequestTracker::issue(CodeId code, NodeId requester, SimTime t) {
  RequestRecord r;
  r.request_id = static_cast<RequestId>(records_.size());
  r.code = code;
  r.requester = requester;
  r.issued_at = t;
  r.warmup = t < warmup_;
  records_.push_back(r);
  return r.request_id;
}

void RequestTracker::answer(RequestId id, NodeId claimed_host, NodeId true_host) {
  RequestRecord& r = get(id);
  r.answered_host = claimed_host;
  r.answer_correct = claimed_host == true_host;
}

void RequestTracker::resolve(RequestId id, SimTime t) {
  RequestRecord& r = get(id);
  if (r.status != RequestStatus::InFlight) throw InvariantViolation("request completed twice");
  if (t < r.issued_at) throw InvariantViolation("request resolved before it was issued");
  r.status = RequestStatus::Resolved;
  r.finished_at = t;
}

void RequestTracker::fail(RequestId id, SimTime t) {
  RequestRecord& r = get(id);
  if (r.status != RequestStatus::InFlight) throw InvariantViolation("request completed twice");
  r.status = RequestStatus::Failed;
  r.finished_at = t;
}

void RequestTracker::note_jump(CodeId code) {
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) {
    if (it->code == code && it->status == RequestStatus::InFlight) it->concurrent_jump = true;
  }
}

}  // namespace mcloc
