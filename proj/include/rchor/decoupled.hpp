#pragma once

/**
 * @file decoupled.hpp
 * @brief Decoupled reduction: asynchronous forward and backward steps driven by monitors.
 */

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "rchor/configuration.hpp"

namespace rchor {

enum class Rule {
  Init, Out, In, Sel, Bra, Beta, Spawn,
  RInit, RollS, RollC, ROut, RIn, RSel, RBra, RBeta, RSpawn,
};

inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::Init: return "init";
    case Rule::Out: return "out";
    case Rule::In: return "in";
    case Rule::Sel: return "sel";
    case Rule::Bra: return "bra";
    case Rule::Beta: return "beta";
    case Rule::Spawn: return "spawn";
    case Rule::RInit: return "rInit";
    case Rule::RollS: return "rollS";
    case Rule::RollC: return "rollC";
    case Rule::ROut: return "rOut";
    case Rule::RIn: return "rIn";
    case Rule::RSel: return "rSel";
    case Rule::RBra: return "rBra";
    case Rule::RBeta: return "rBeta";
    case Rule::RSpawn: return "rSpawn";
  }
  return "?";
}

inline bool is_forward(Rule r) { return static_cast<int>(r) <= static_cast<int>(Rule::Spawn); }

enum class Direction { Forward, Backward };

/// A located instance of a rule: which components it consumes and on whose behalf.
struct Redex {
  Rule rule;
  std::string session;
  std::vector<std::string> subjects;
  std::optional<Label> label;
  std::vector<std::size_t> witness;

  friend bool operator==(const Redex&, const Redex&) = default;
};

inline std::string to_string(const Redex& r) {
  std::string s = to_string(r.rule);
  for (std::size_t i = 0; i < r.subjects.size(); ++i) s += (i ? "," : "@") + r.subjects[i];
  if (r.label) s += ":" + *r.label;
  return s;
}

struct Step {
  Redex redex;
  Configuration target;
};

namespace detail {

/// Copy-on-write view of a configuration's components.
class Rewrite {
 public:
  explicit Rewrite(const Configuration& m) : names_(m.restricted()) {
    for (const auto& c : m.parts()) parts_.emplace_back(c);
  }

  template <class C>
  C& at(std::size_t i) {
    return std::get<C>(*parts_[i]);
  }
  void erase(std::size_t i) { parts_[i].reset(); }
  void add(Component c) { extra_.push_back(std::move(c)); }
  void restrict(std::string n) { names_.push_back(std::move(n)); }

  Configuration done() {
    std::vector<Component> out;
    for (auto& c : parts_)
      if (c) out.push_back(std::move(*c));
    for (auto& c : extra_) out.push_back(std::move(c));
    return Configuration(std::move(names_), std::move(out));
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::optional<Component>> parts_;
  std::vector<Component> extra_;
};

inline bool may_act_for(const Configuration& m, std::size_t queue, const Participant& p, const Participant& r) {
  if (p == r) return true;
  return roles_in_queue(r, m.get<SessionQueue>(queue).past).count(p) > 0;
}

inline std::string fresh_var(const std::string& y, const Store& s) {
  if (!s.contains(y)) return y;
  for (std::size_t n = 1;; ++n) {
    auto c = y + "#" + std::to_string(n);
    if (!s.contains(c)) return c;
  }
}

template <class F>
std::size_t label_index(const Branches<F>& bs, const Label& l) {
  for (std::size_t i = 0; i < bs.size(); ++i)
    if (bs[i].first == l) return i;
  return bs.size();
}

template <class F>
Branches<F> without(const Branches<F>& bs, const Label& l) {
  Branches<F> out;
  for (const auto& b : bs)
    if (b.first != l) out.push_back(b);
  return out;
}

inline bool subset(const std::set<Label>& a, const std::set<Label>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct Session {
  std::size_t queue;
  std::size_t monitor;
};

/// Monitor and queue for an endpoint channel, if both exist.
inline std::optional<Session> session_of(const Configuration& m, const Name& chan) {
  if (!chan.is_endpoint()) return std::nullopt;
  auto mi = m.monitor_index(chan.id, chan.role);
  auto qi = m.queue_index(chan.id);
  if (!mi || !qi) return std::nullopt;
  return Session{*qi, *mi};
}

// ------------------------------------------------------------ forward rules

inline void rule_init(const Configuration& m, std::vector<Step>& out) {
  for (auto ri : m.indices_of<LocatedService>()) {
    const auto& req = m.get<LocatedService>(ri);
    if (req.kind != ServiceKind::Request) continue;
    auto parts = participants(req.protocol);
    if (!parts.count(req.participant)) continue;
    std::vector<std::pair<Participant, LocalType>> roles;
    try {
      for (const auto& p : parts) roles.emplace_back(p, project(req.protocol, p));
    } catch (const Error&) {
      continue;
    }
    if (!type_equal(req.annot, project(req.protocol, req.participant))) continue;

    std::vector<std::vector<std::size_t>> choices;
    for (const auto& [p, t] : roles) {
      if (p == req.participant) continue;
      std::vector<std::size_t> cands;
      for (auto ai : m.indices_of<LocatedService>()) {
        const auto& acc = m.get<LocatedService>(ai);
        if (acc.kind == ServiceKind::Accept && acc.shared == req.shared && acc.participant == p &&
            type_equal(acc.annot, t))
          cands.push_back(ai);
      }
      choices.push_back(std::move(cands));
    }

    const std::string session = "s." + req.loc;
    std::vector<std::size_t> pick(choices.size(), 0);
    while (true) {
      if (std::any_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); })) break;
      std::vector<std::size_t> members{ri};
      for (std::size_t i = 0; i < choices.size(); ++i) members.push_back(choices[i][pick[i]]);

      Rewrite w(m);
      w.restrict(session);
      std::vector<std::string> locs;
      for (auto idx : members) {
        const auto& svc = m.get<LocatedService>(idx);
        locs.push_back(svc.loc);
        w.erase(idx);
        auto body = subst_var(svc.body, svc.var, Name::endpoint(session, svc.participant));
        w.add(RunningProcess{svc.loc, svc.participant, {}, body});
        Monitor mon{session, svc.participant, Tag::Empty, HistoryLocal::at_start(svc.annot), {svc.var},
                    Store().update(svc.var, Name::shared(svc.shared)),
                    MonitorOrigin{svc.loc, svc.kind, svc.protocol_name, svc.protocol}};
        w.add(std::move(mon));
      }
      w.add(SessionQueue{session, {}, {}});
      std::sort(locs.begin(), locs.end());
      std::vector<std::size_t> wit = members;
      std::sort(wit.begin(), wit.end());
      out.push_back({{Rule::Init, session, locs, std::nullopt, wit}, w.done()});

      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }
}

inline void rule_comm(const Configuration& m, std::vector<Step>& out) {
  for (auto ri : m.indices_of<RunningProcess>()) {
    const auto& run = m.get<RunningProcess>(ri);
    const Process body = head_unfold(run.body);
    const auto& node = body.node().v;

    if (const auto* o = std::get_if<POut>(&node)) {
      auto ses = session_of(m, o->chan);
      if (!ses) continue;
      const auto& mon = m.get<Monitor>(ses->monitor);
      const auto* send = std::get_if<LSend>(&mon.history.focus.node().v);
      if (mon.tag != Tag::Empty || !send || !may_act_for(m, ses->queue, o->chan.role, run.participant)) continue;
      Rewrite w(m);
      w.at<RunningProcess>(ri).body = o->cont;
      auto& nm = w.at<Monitor>(ses->monitor);
      nm.history.frames.push_back(LFrameSend{send->peer, send->payload});
      nm.history.focus = send->cont;
      nm.history.settle();
      w.at<SessionQueue>(ses->queue).future.push_back(
          Message::data(o->chan.role, send->peer, eval_value(o->value, mon.store), o->value));
      out.push_back({{Rule::Out, o->chan.id, {o->chan.role, run.loc}, std::nullopt, {ri, ses->monitor, ses->queue}},
                     w.done()});
    } else if (const auto* in = std::get_if<PIn>(&node)) {
      auto ses = session_of(m, in->chan);
      if (!ses) continue;
      const auto& mon = m.get<Monitor>(ses->monitor);
      const auto* recv = std::get_if<LRecv>(&mon.history.focus.node().v);
      if (mon.tag != Tag::Empty || !recv || !may_act_for(m, ses->queue, in->chan.role, run.participant)) continue;
      const auto& q = m.get<SessionQueue>(ses->queue);
      for (auto i : queue_fronts(q.future)) {
        const auto& msg = q.future[i];
        if (msg.label || msg.from != recv->peer || msg.to != in->chan.role) continue;
        Rewrite w(m);
        auto y = fresh_var(in->var, mon.store);
        w.at<RunningProcess>(ri).body = y == in->var ? in->cont : subst_var(in->cont, in->var, Name::var(y));
        auto& nm = w.at<Monitor>(ses->monitor);
        nm.tracked.push_back(y);
        nm.store = nm.store.update(y, msg.value);
        nm.history.frames.push_back(LFrameRecv{recv->peer, recv->payload});
        nm.history.focus = recv->cont;
        nm.history.settle();
        auto& nq = w.at<SessionQueue>(ses->queue);
        nq.past.push_back(msg);
        nq.future.erase(nq.future.begin() + static_cast<std::ptrdiff_t>(i));
        out.push_back({{Rule::In, in->chan.id, {in->chan.role, run.loc}, std::nullopt, {ri, ses->monitor, ses->queue}},
                       w.done()});
      }
    } else if (const auto* sel = std::get_if<PSelect>(&node)) {
      auto ses = session_of(m, sel->chan);
      if (!ses) continue;
      const auto& mon = m.get<Monitor>(ses->monitor);
      const auto* ty = std::get_if<LSelect>(&mon.history.focus.node().v);
      if (mon.tag != Tag::Empty || !ty || !may_act_for(m, ses->queue, sel->chan.role, run.participant)) continue;
      if (!subset(label_set(ty->branches), label_set(sel->branches))) continue;
      for (std::size_t j = 0; j < ty->branches.size(); ++j) {
        const auto& [l, s] = ty->branches[j];
        Rewrite w(m);
        auto& nr = w.at<RunningProcess>(ri);
        nr.stack.push_back({proc::select(sel->chan, without(sel->branches, l)), l, label_index(sel->branches, l)});
        nr.body = *find_branch(sel->branches, l);
        auto& nm = w.at<Monitor>(ses->monitor);
        nm.history.frames.push_back(LFrameSelect{ty->peer, l, j, without(ty->branches, l)});
        nm.history.focus = s;
        nm.history.settle();
        w.at<SessionQueue>(ses->queue).future.push_back(Message::choice(sel->chan.role, ty->peer, l));
        out.push_back(
            {{Rule::Sel, sel->chan.id, {sel->chan.role, run.loc}, l, {ri, ses->monitor, ses->queue}}, w.done()});
      }
    } else if (const auto* bra = std::get_if<PBranch>(&node)) {
      auto ses = session_of(m, bra->chan);
      if (!ses) continue;
      const auto& mon = m.get<Monitor>(ses->monitor);
      const auto* ty = std::get_if<LBranch>(&mon.history.focus.node().v);
      if (mon.tag != Tag::Empty || !ty || !may_act_for(m, ses->queue, bra->chan.role, run.participant)) continue;
      if (!subset(label_set(bra->branches), label_set(ty->branches))) continue;
      const auto& q = m.get<SessionQueue>(ses->queue);
      for (auto i : queue_fronts(q.future)) {
        const auto& msg = q.future[i];
        if (!msg.label || msg.from != ty->peer || msg.to != bra->chan.role) continue;
        const auto& l = *msg.label;
        const auto* pw = find_branch(bra->branches, l);
        if (!pw) continue;
        Rewrite w(m);
        auto& nr = w.at<RunningProcess>(ri);
        nr.stack.push_back({proc::branch(bra->chan, without(bra->branches, l)), l, label_index(bra->branches, l)});
        nr.body = *pw;
        auto& nm = w.at<Monitor>(ses->monitor);
        nm.history.frames.push_back(LFrameBranch{ty->peer, l, label_index(ty->branches, l), without(ty->branches, l)});
        nm.history.focus = *find_branch(ty->branches, l);
        nm.history.settle();
        auto& nq = w.at<SessionQueue>(ses->queue);
        nq.past.push_back(msg);
        nq.future.erase(nq.future.begin() + static_cast<std::ptrdiff_t>(i));
        out.push_back(
            {{Rule::Bra, bra->chan.id, {bra->chan.role, run.loc}, l, {ri, ses->monitor, ses->queue}}, w.done()});
      }
    }
  }
}

/// The body an application reduces to, if its function is an abstraction.
inline std::optional<Process> beta_body(const PApp& app, const Store& store) {
  Value f;
  try {
    f = eval_value(app.fun, store);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (!is_abstraction(f)) return std::nullopt;
  const auto& abs = as_abstraction(f);
  if (abs.param == kThunkParam) return abs.body;
  return subst_var(abs.body, abs.param, eval_name(app.arg, store));
}

inline void rule_local(const Configuration& m, std::vector<Step>& out) {
  for (auto ri : m.indices_of<RunningProcess>()) {
    const auto& run = m.get<RunningProcess>(ri);
    const Process body = head_unfold(run.body);
    const auto* app = std::get_if<PApp>(&body.node().v);
    const auto* par = std::get_if<PPar>(&body.node().v);
    if (!app && !par) continue;
    for (auto mi : m.indices_of<Monitor>()) {
      const auto& mon = m.get<Monitor>(mi);
      if (mon.participant != run.participant || mon.tag != Tag::Empty) continue;
      Rewrite w(m);
      auto& nr = w.at<RunningProcess>(ri);
      auto& nm = w.at<Monitor>(mi);
      if (app) {
        if (!std::get_if<Name>(&app->fun) && !is_abstraction(app->fun)) continue;
        auto reduced = beta_body(*app, mon.store);
        if (!reduced) continue;
        const auto key = "k." + run.loc + "." + std::to_string(mon.history.frames.size());
        nr.body = *reduced;
        nm.history.frames.push_back(LFrameKey{key});
        w.add(RunningFunction{key, body, run.loc});
        w.restrict(key);
        out.push_back({{Rule::Beta, mon.session, {run.loc, run.participant}, std::nullopt, {ri, mi}}, w.done()});
      } else {
        const auto l1 = run.loc + ".1", l2 = run.loc + ".2";
        nr.body = proc::nil();
        nm.history.frames.push_back(LFrameSpawn{run.loc, l1, l2});
        w.add(RunningProcess{l1, run.participant, {}, par->left});
        w.add(RunningProcess{l2, run.participant, {}, par->right});
        w.restrict(l1);
        w.restrict(l2);
        out.push_back({{Rule::Spawn, mon.session, {run.loc, run.participant}, std::nullopt, {ri, mi}}, w.done()});
      }
    }
  }
}

// ----------------------------------------------------------- backward rules

inline void rule_rinit(const Configuration& m, std::vector<Step>& out) {
  for (auto qi : m.indices_of<SessionQueue>()) {
    const auto& q = m.get<SessionQueue>(qi);
    if (!q.past.empty() || !q.future.empty()) continue;
    std::vector<std::size_t> mons, runs;
    bool ok = true;
    for (auto mi : m.indices_of<Monitor>()) {
      const auto& mon = m.get<Monitor>(mi);
      if (mon.session != q.session) continue;
      mons.push_back(mi);
      if (mon.tag != Tag::Empty || !mon.history.at_beginning() || mon.tracked.size() != 1) ok = false;
    }
    if (!ok || mons.empty()) continue;
    for (auto mi : mons) {
      const auto& mon = m.get<Monitor>(mi);
      std::optional<std::size_t> found;
      for (auto ri : m.indices_of<RunningProcess>()) {
        const auto& run = m.get<RunningProcess>(ri);
        if (run.loc == mon.origin.loc && run.participant == mon.participant && run.stack.empty()) found = ri;
      }
      const auto* a = mon.store.lookup(mon.tracked[0]);
      if (!found || !a || !std::holds_alternative<Name>(*a) || std::get<Name>(*a).kind != Name::Kind::Shared) {
        ok = false;
        break;
      }
      runs.push_back(*found);
    }
    if (!ok) continue;

    Rewrite w(m);
    std::vector<std::string> locs;
    std::vector<std::size_t> wit{qi};
    w.erase(qi);
    for (std::size_t i = 0; i < mons.size(); ++i) {
      const auto& mon = m.get<Monitor>(mons[i]);
      const auto& run = m.get<RunningProcess>(runs[i]);
      const auto& x = mon.tracked[0];
      LocatedService svc{mon.origin.loc,
                         mon.origin.kind,
                         std::get<Name>(*mon.store.lookup(x)).id,
                         x,
                         mon.history.original(),
                         mon.origin.protocol_name,
                         mon.origin.protocol,
                         mon.participant,
                         abstract_name(run.body, Name::endpoint(q.session, mon.participant), x)};
      w.erase(mons[i]);
      w.erase(runs[i]);
      w.add(std::move(svc));
      locs.push_back(mon.origin.loc);
      wit.push_back(mons[i]);
      wit.push_back(runs[i]);
    }
    std::sort(locs.begin(), locs.end());
    std::sort(wit.begin(), wit.end());
    out.push_back({{Rule::RInit, q.session, locs, std::nullopt, wit}, w.done()});
  }
}

inline void rule_roll(const Configuration& m, std::vector<Step>& out) {
  for (auto pi : m.indices_of<Monitor>()) {
    const auto& mp = m.get<Monitor>(pi);
    if (mp.tag != Tag::Empty) continue;
    const auto* tp = mp.history.top();
    if (!tp) continue;
    const auto* recv = std::get_if<LFrameRecv>(tp);
    const auto* bra = std::get_if<LFrameBranch>(tp);
    if (!recv && !bra) continue;
    const auto& peer = recv ? recv->peer : bra->peer;
    auto qi = m.monitor_index(mp.session, peer);
    if (!qi) continue;
    const auto& mq = m.get<Monitor>(*qi);
    if (mq.tag != Tag::Empty || !mq.history.top()) continue;
    const auto* tq = mq.history.top();
    bool match = false;
    if (recv) {
      const auto* send = std::get_if<LFrameSend>(tq);
      match = send && send->peer == mp.participant && value_type_equal(send->payload, recv->payload);
    } else {
      const auto* sel = std::get_if<LFrameSelect>(tq);
      match = sel && sel->peer == mp.participant && sel->chosen == bra->chosen;
    }
    if (!match) continue;
    Rewrite w(m);
    w.at<Monitor>(pi).tag = Tag::Full;
    w.at<Monitor>(*qi).tag = Tag::Full;
    std::optional<Label> l;
    if (bra) l = bra->chosen;
    out.push_back({{recv ? Rule::RollS : Rule::RollC, mp.session, {mp.participant, peer}, l,
                    {std::min(pi, *qi), std::max(pi, *qi)}},
                   w.done()});
  }
}

inline void rule_undo_comm(const Configuration& m, std::vector<Step>& out) {
  for (auto mi : m.indices_of<Monitor>()) {
    const auto& mon = m.get<Monitor>(mi);
    if (mon.tag != Tag::Full) continue;
    const auto* top = mon.history.top();
    auto qi = m.queue_index(mon.session);
    if (!top || !qi) continue;
    const auto& q = m.get<SessionQueue>(*qi);
    const auto& p = mon.participant;
    const Name chan = Name::endpoint(mon.session, p);

    for (auto ri : m.indices_of<RunningProcess>()) {
      const auto& run = m.get<RunningProcess>(ri);
      if (!may_act_for(m, *qi, p, run.participant)) continue;

      if (const auto* send = std::get_if<LFrameSend>(top)) {
        for (auto i : queue_fronts(q.future)) {
          const auto& msg = q.future[i];
          if (msg.label || msg.from != p || msg.to != send->peer) continue;
          Rewrite w(m);
          w.at<RunningProcess>(ri).body = proc::out(chan, msg.source, run.body);
          auto& nm = w.at<Monitor>(mi);
          nm.tag = Tag::Empty;
          auto [f, cont] = nm.history.pop();
          nm.history.focus = local::send(send->peer, send->payload, cont);
          auto& nq = w.at<SessionQueue>(*qi);
          nq.future.erase(nq.future.begin() + static_cast<std::ptrdiff_t>(i));
          out.push_back({{Rule::ROut, mon.session, {p, run.loc}, std::nullopt, {ri, mi, *qi}}, w.done()});
        }
      } else if (const auto* recv = std::get_if<LFrameRecv>(top)) {
        if (mon.tracked.size() < 2) continue;
        const auto& y = mon.tracked.back();
        for (auto i : queue_backs(q.past)) {
          const auto& msg = q.past[i];
          if (msg.label || msg.from != recv->peer || msg.to != p) continue;
          Rewrite w(m);
          w.at<RunningProcess>(ri).body = proc::in(chan, y, run.body);
          auto& nm = w.at<Monitor>(mi);
          nm.tag = Tag::Empty;
          nm.tracked.pop_back();
          nm.store = nm.store.remove(y);
          auto [f, cont] = nm.history.pop();
          nm.history.focus = local::recv(recv->peer, recv->payload, cont);
          auto& nq = w.at<SessionQueue>(*qi);
          nq.future.insert(nq.future.begin(), msg);
          nq.past.erase(nq.past.begin() + static_cast<std::ptrdiff_t>(i));
          out.push_back({{Rule::RIn, mon.session, {p, run.loc}, std::nullopt, {ri, mi, *qi}}, w.done()});
        }
      } else if (const auto* sel = std::get_if<LFrameSelect>(top)) {
        if (run.stack.empty()) continue;
        const auto& entry = run.stack.back();
        const auto* alts = std::get_if<PSelect>(&entry.alternatives.node().v);
        if (!alts || alts->chan != chan || entry.chosen != sel->chosen || find_branch(alts->branches, sel->chosen))
          continue;
        auto restored = label_set(alts->branches);
        restored.insert(sel->chosen);
        auto type_labels = label_set(sel->others);
        type_labels.insert(sel->chosen);
        if (!subset(restored, type_labels)) continue;
        for (auto i : queue_fronts(q.future)) {
          const auto& msg = q.future[i];
          if (!msg.label || *msg.label != sel->chosen || msg.from != p || msg.to != sel->peer) continue;
          Rewrite w(m);
          auto& nr = w.at<RunningProcess>(ri);
          auto bs = alts->branches;
          bs.insert(bs.begin() + static_cast<std::ptrdiff_t>(std::min(entry.index, bs.size())), {sel->chosen, run.body});
          nr.body = proc::select(chan, std::move(bs));
          nr.stack.pop_back();
          auto& nm = w.at<Monitor>(mi);
          nm.tag = Tag::Empty;
          auto [f, cont] = nm.history.pop();
          auto tbs = sel->others;
          tbs.insert(tbs.begin() + static_cast<std::ptrdiff_t>(sel->index), {sel->chosen, cont});
          nm.history.focus = local::select(sel->peer, std::move(tbs));
          auto& nq = w.at<SessionQueue>(*qi);
          nq.future.erase(nq.future.begin() + static_cast<std::ptrdiff_t>(i));
          out.push_back({{Rule::RSel, mon.session, {p, run.loc}, sel->chosen, {ri, mi, *qi}}, w.done()});
        }
      } else if (const auto* bra = std::get_if<LFrameBranch>(top)) {
        if (run.stack.empty()) continue;
        const auto& entry = run.stack.back();
        const auto* alts = std::get_if<PBranch>(&entry.alternatives.node().v);
        if (!alts || alts->chan != chan || entry.chosen != bra->chosen || find_branch(alts->branches, bra->chosen))
          continue;
        auto restored = label_set(alts->branches);
        restored.insert(bra->chosen);
        auto type_labels = label_set(bra->others);
        type_labels.insert(bra->chosen);
        if (!subset(restored, type_labels)) continue;
        for (auto i : queue_backs(q.past)) {
          const auto& msg = q.past[i];
          if (!msg.label || *msg.label != bra->chosen || msg.from != bra->peer || msg.to != p) continue;
          Rewrite w(m);
          auto& nr = w.at<RunningProcess>(ri);
          auto bs = alts->branches;
          bs.insert(bs.begin() + static_cast<std::ptrdiff_t>(std::min(entry.index, bs.size())), {bra->chosen, run.body});
          nr.body = proc::branch(chan, std::move(bs));
          nr.stack.pop_back();
          auto& nm = w.at<Monitor>(mi);
          nm.tag = Tag::Empty;
          auto [f, cont] = nm.history.pop();
          auto tbs = bra->others;
          tbs.insert(tbs.begin() + static_cast<std::ptrdiff_t>(bra->index), {bra->chosen, cont});
          nm.history.focus = local::branch(bra->peer, std::move(tbs));
          auto& nq = w.at<SessionQueue>(*qi);
          nq.future.insert(nq.future.begin(), msg);
          nq.past.erase(nq.past.begin() + static_cast<std::ptrdiff_t>(i));
          out.push_back({{Rule::RBra, mon.session, {p, run.loc}, bra->chosen, {ri, mi, *qi}}, w.done()});
        }
      }
    }
  }
}

inline void rule_undo_local(const Configuration& m, std::vector<Step>& out) {
  for (auto mi : m.indices_of<Monitor>()) {
    const auto& mon = m.get<Monitor>(mi);
    if (mon.tag != Tag::Empty) continue;
    const auto* top = mon.history.top();
    if (!top) continue;

    if (const auto* kf = std::get_if<LFrameKey>(top)) {
      for (auto fi : m.indices_of<RunningFunction>()) {
        const auto& fn = m.get<RunningFunction>(fi);
        if (fn.key != kf->key) continue;
        for (auto ri : m.indices_of<RunningProcess>()) {
          const auto& run = m.get<RunningProcess>(ri);
          if (run.loc != fn.loc || run.participant != mon.participant) continue;
          const auto* app = std::get_if<PApp>(&fn.saved.node().v);
          auto fresh = app ? beta_body(*app, mon.store) : std::nullopt;
          if (!fresh || to_string(*fresh) != to_string(run.body)) continue;
          Rewrite w(m);
          w.at<RunningProcess>(ri).body = fn.saved;
          w.at<Monitor>(mi).history.pop();
          w.erase(fi);
          out.push_back({{Rule::RBeta, mon.session, {run.loc, run.participant}, std::nullopt,
                          {std::min(ri, mi), std::max(ri, mi), fi}},
                         w.done()});
        }
      }
    } else if (const auto* sf = std::get_if<LFrameSpawn>(top)) {
      std::optional<std::size_t> parent, first, second;
      for (auto ri : m.indices_of<RunningProcess>()) {
        const auto& run = m.get<RunningProcess>(ri);
        if (run.participant != mon.participant) continue;
        if (run.loc == sf->parent && std::holds_alternative<PNil>(run.body.node().v)) parent = ri;
        if (run.loc == sf->first && run.stack.empty()) first = ri;
        if (run.loc == sf->second && run.stack.empty()) second = ri;
      }
      if (!parent || !first || !second) continue;
      Rewrite w(m);
      w.at<RunningProcess>(*parent).body =
          proc::par(m.get<RunningProcess>(*first).body, m.get<RunningProcess>(*second).body);
      w.erase(*first);
      w.erase(*second);
      w.at<Monitor>(mi).history.pop();
      std::vector<std::size_t> wit{*parent, mi, *first, *second};
      std::sort(wit.begin(), wit.end());
      out.push_back({{Rule::RSpawn, mon.session, {sf->parent, mon.participant}, std::nullopt, wit}, w.done()});
    }
  }
}

inline bool redex_less(const Redex& a, const Redex& b) {
  return std::tie(a.rule, a.session, a.subjects, a.label, a.witness) <
         std::tie(b.rule, b.session, b.subjects, b.label, b.witness);
}

}  // namespace detail

/// All decoupled steps from m in one direction, in a deterministic order.
inline std::vector<Step> decoupled_steps(const Configuration& m, Direction dir) {
  std::vector<Step> out;
  if (dir == Direction::Forward) {
    detail::rule_init(m, out);
    detail::rule_comm(m, out);
    detail::rule_local(m, out);
  } else {
    detail::rule_rinit(m, out);
    detail::rule_roll(m, out);
    detail::rule_undo_comm(m, out);
    detail::rule_undo_local(m, out);
  }
  std::stable_sort(out.begin(), out.end(), [](const Step& a, const Step& b) { return detail::redex_less(a.redex, b.redex); });
  return out;
}

inline std::vector<Redex> enumerate_forward(const Configuration& m) {
  std::vector<Redex> out;
  for (auto& s : decoupled_steps(m, Direction::Forward)) out.push_back(std::move(s.redex));
  return out;
}

inline std::vector<Redex> enumerate_backward(const Configuration& m) {
  std::vector<Redex> out;
  for (auto& s : decoupled_steps(m, Direction::Backward)) out.push_back(std::move(s.redex));
  return out;
}

inline Configuration apply(const Configuration& m, const Redex& r) {
  for (auto& s : decoupled_steps(m, is_forward(r.rule) ? Direction::Forward : Direction::Backward))
    if (s.redex == r) return std::move(s.target);
  throw Error(ErrorKind::StaleRedex, to_string(r) + " is not enabled");
}

/// Selections whose process offers labels its monitor's type does not:
/// these can commit forward but can never be rolled back.
inline std::vector<std::string> choice_asymmetries(const Configuration& m) {
  std::vector<std::string> out;
  for (auto ri : m.indices_of<RunningProcess>()) {
    const auto& run = m.get<RunningProcess>(ri);
    const auto body = head_unfold(run.body);
    const auto* sel = std::get_if<PSelect>(&body.node().v);
    if (!sel || !sel->chan.is_endpoint()) continue;
    auto mi = m.monitor_index(sel->chan.id, sel->chan.role);
    if (!mi) continue;
    const auto* ty = std::get_if<LSelect>(&m.get<Monitor>(*mi).history.focus.node().v);
    if (ty && label_set(ty->branches) != label_set(sel->branches) &&
        detail::subset(label_set(ty->branches), label_set(sel->branches)))
      out.push_back(run.loc + ": selection on " + to_string(sel->chan) +
                    " offers labels outside its type; a committed choice here cannot be undone");
  }
  return out;
}

}  // namespace rchor
