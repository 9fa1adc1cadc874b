#include "evsync/history.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "evsync/errors.hpp"

namespace evsync {
namespace {

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

bool Event::operator==(const Event& other) const {
  return kind == other.kind && proc == other.proc && obj == other.obj &&
         op == other.op && payload == other.payload && index == other.index;
}

History History::of(std::vector<Event> events) {
  History h;
  h.events_ = std::move(events);
  for (std::size_t i = 0; i < h.events_.size(); ++i)
    h.events_[i].index = static_cast<int>(i);
  return h;
}

History History::derived(std::vector<Event> events) {
  History h;
  h.events_ = std::move(events);
  return h;
}

void History::append_invocation(int proc, Symbol obj, Symbol op,
                                std::vector<Value> args) {
  Event e;
  e.kind = EventKind::Invocation;
  e.proc = proc;
  e.obj = std::move(obj);
  e.op = std::move(op);
  e.payload = std::move(args);
  e.index = events_.empty() ? 0 : events_.back().index + 1;
  events_.push_back(std::move(e));
}

void History::append_response(int proc, Symbol obj, Symbol op, Value ret) {
  Event e;
  e.kind = EventKind::Response;
  e.proc = proc;
  e.obj = std::move(obj);
  e.op = std::move(op);
  e.payload = {std::move(ret)};
  e.index = events_.empty() ? 0 : events_.back().index + 1;
  events_.push_back(std::move(e));
}

bool is_sequential(const History& h) {
  const auto& ev = h.events();
  std::size_t i = 0;
  while (i < ev.size()) {
    if (ev[i].kind != EventKind::Invocation) return false;
    if (i + 1 == ev.size()) return true;  // one trailing open invocation
    const Event& res = ev[i + 1];
    if (res.kind != EventKind::Response || res.proc != ev[i].proc ||
        res.obj != ev[i].obj || res.op != ev[i].op)
      return false;
    i += 2;
  }
  return true;
}

bool is_well_formed(const History& h) {
  std::map<int, History> per_proc;
  for (const Event& e : h.events()) per_proc[e.proc];  // touch
  for (auto& [p, unused] : per_proc)
    if (!is_sequential(project_process(h, p))) return false;
  return true;
}

History project_process(const History& h, int proc) {
  std::vector<Event> out;
  for (const Event& e : h.events())
    if (e.proc == proc) out.push_back(e);
  return History::derived(std::move(out));
}

History project_object(const History& h, const Symbol& obj) {
  std::vector<Event> out;
  for (const Event& e : h.events())
    if (e.obj == obj) out.push_back(e);
  return History::derived(std::move(out));
}

std::vector<OperationRecord> match_operations(const History& h) {
  if (!is_well_formed(h))
    throw MalformedHistory("history is not well-formed");
  std::vector<OperationRecord> records;
  std::map<int, std::size_t> open;  // proc -> index into records
  for (const Event& e : h.events()) {
    if (e.kind == EventKind::Invocation) {
      OperationRecord r;
      r.proc = e.proc;
      r.obj = e.obj;
      r.op = e.op;
      r.args = e.payload;
      r.inv_index = e.index;
      open[e.proc] = records.size();
      records.push_back(std::move(r));
    } else {
      OperationRecord& r = records[open.at(e.proc)];
      r.res_index = e.index;
      r.ret = e.payload.at(0);
      open.erase(e.proc);
    }
  }
  return records;
}

History suffix_after(const History& h, int t) {
  if (t < 0 || static_cast<std::size_t>(t) > h.size())
    throw OutOfRange("suffix point " + std::to_string(t) +
                     " outside history of length " + std::to_string(h.size()));
  std::vector<Event> out;
  for (const Event& e : h.events())
    if (e.index >= t) out.push_back(e);
  return History::derived(std::move(out));
}

History parse_trace(const std::string& text) {
  History h;
  int lineno = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      throw ParseError(lineno, "carriage return; traces use LF line endings");
    std::vector<std::string> toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    const std::string& tag = toks[0];
    if (tag != "inv" && tag != "res")
      throw ParseError(lineno, "expected 'inv' or 'res', got '" + tag + "'");
    if (toks.size() < 4)
      throw ParseError(lineno, "expected '<tag> proc obj op ...'");
    int proc = 0;
    try {
      std::size_t used = 0;
      proc = std::stoi(toks[1], &used);
      if (used != toks[1].size() || proc < 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad process id '" + toks[1] + "'");
    }
    if (!valid_name(toks[2]))
      throw ParseError(lineno, "bad object name '" + toks[2] + "'");
    if (!valid_name(toks[3]))
      throw ParseError(lineno, "bad operation name '" + toks[3] + "'");
    std::vector<Value> values;
    for (std::size_t i = 4; i < toks.size(); ++i) {
      try {
        values.push_back(Value::parse(toks[i]));
      } catch (const Error& e) {
        throw ParseError(lineno, e.what());
      }
    }
    if (tag == "inv") {
      h.append_invocation(proc, toks[2], toks[3], std::move(values));
    } else {
      if (values.size() != 1)
        throw ParseError(lineno, "response line needs exactly one value");
      h.append_response(proc, toks[2], toks[3], std::move(values[0]));
    }
  }
  return h;
}

std::string format_trace(const History& h) {
  std::string out;
  for (const Event& e : h.events()) {
    out += e.kind == EventKind::Invocation ? "inv " : "res ";
    out += std::to_string(e.proc);
    out += ' ';
    out += e.obj;
    out += ' ';
    out += e.op;
    for (const Value& v : e.payload) {
      out += ' ';
      out += v.str();
    }
    out += '\n';
  }
  return out;
}

}  // namespace evsync
