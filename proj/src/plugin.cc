// Copyright 2026 The InstKG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "instkg/plugin.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <map>

#include "instkg/error.h"
#include "instkg/unicode.h"

namespace instkg {
namespace {

void SetNonBlocking(int fd) { fcntl(fd, F_SETFL, fcntl(fd, F_GETFL) | O_NONBLOCK); }

std::string Compact(const Json &j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace

PluginProcess::PluginProcess(std::vector<std::string> argv, std::chrono::milliseconds timeout)
    : argv_(std::move(argv)), timeout_(timeout) {
  if (argv_.empty()) throw Error("plug-in command is empty");
  if (timeout_.count() <= 0) throw Error("plug-in timeout must be positive");
  // A dead child must surface as an error, not as a fatal signal.
  signal(SIGPIPE, SIG_IGN);

  int in_pipe[2], out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0) throw Error("pipe: " + std::string(std::strerror(errno)));
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw Error("pipe: " + std::string(std::strerror(errno)));
  }
  // Reports exec failure back to the parent.
  int err_pipe[2];
  if (pipe2(err_pipe, O_CLOEXEC) != 0) throw Error("pipe: " + std::string(std::strerror(errno)));

  std::vector<char *> args;
  for (auto &a : argv_) args.push_back(a.data());
  args.push_back(nullptr);

  pid_t pid = fork();
  if (pid < 0) throw Error("fork: " + std::string(std::strerror(errno)));
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    execvp(args[0], args.data());
    int e = errno;
    ssize_t ignored = write(err_pipe[1], &e, sizeof e);
    (void)ignored;
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);
  int child_errno = 0;
  ssize_t n = read(err_pipe[0], &child_errno, sizeof child_errno);
  close(err_pipe[0]);
  if (n == sizeof child_errno) {
    close(in_pipe[1]);
    close(out_pipe[0]);
    waitpid(pid, nullptr, 0);
    throw Error("cannot start plug-in '" + argv_[0] + "': " + std::strerror(child_errno));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  SetNonBlocking(to_child_);
  SetNonBlocking(from_child_);
}

PluginProcess::~PluginProcess() {
  if (pid_ <= 0) return;
  // Closing stdin is the shutdown signal; give the child a moment to exit.
  close(to_child_);
  to_child_ = -1;
  for (int i = 0; i < 50; ++i) {
    if (waitpid(pid_, nullptr, WNOHANG) == pid_) {
      pid_ = -1;
      break;
    }
    usleep(2000);
  }
  Kill();
}

void PluginProcess::Fail(const std::string &message) {
  Kill();
  throw ProtocolViolation(message);
}

void PluginProcess::Kill() {
  if (pid_ > 0) {
    kill(pid_, SIGKILL);
    waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
}

std::vector<Json> PluginProcess::Exchange(std::vector<Json> requests) {
  if (pid_ <= 0) throw ProtocolViolation("plug-in is not running");
  std::map<long, size_t> slot_of;
  std::string out;
  for (size_t i = 0; i < requests.size(); ++i) {
    long id = next_id_++;
    requests[i]["id"] = id;
    slot_of[id] = i;
    out += Compact(requests[i]);
    out += '\n';
  }
  std::vector<Json> responses(requests.size());
  std::vector<bool> filled(requests.size(), false);
  size_t remaining = requests.size();
  size_t written = 0;
  const auto deadline = std::chrono::steady_clock::now() + timeout_;

  while (remaining > 0) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      Kill();
      throw ExtractorTimeout("plug-in did not answer within " +
                             std::to_string(timeout_.count()) + " ms");
    }
    pollfd fds[2];
    int nfds = 0;
    fds[nfds++] = {from_child_, POLLIN, 0};
    if (written < out.size()) fds[nfds++] = {to_child_, POLLOUT, 0};
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
    int ready = poll(fds, nfds, wait_ms);
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw Error("poll: " + std::string(std::strerror(errno)));
    }
    if (nfds == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t n = write(to_child_, out.data() + written, out.size() - written);
      if (n > 0) {
        written += static_cast<size_t>(n);
      } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
        Kill();
        throw ProtocolViolation("plug-in closed its input");
      }
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      char buf[65536];
      ssize_t n = read(from_child_, buf, sizeof buf);
      if (n == 0) {
        Kill();
        throw ProtocolViolation("plug-in exited with " + std::to_string(remaining) +
                                " request(s) unanswered");
      }
      if (n < 0) {
        if (errno == EAGAIN || errno == EINTR) continue;
        Kill();
        throw ProtocolViolation("reading plug-in output: " + std::string(std::strerror(errno)));
      }
      pending_.append(buf, static_cast<size_t>(n));
      size_t nl;
      while ((nl = pending_.find('\n')) != std::string::npos) {
        std::string line = pending_.substr(0, nl);
        pending_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        Json response = Json::parse(line, nullptr, false);
        if (response.is_discarded() || !response.is_object()) {
          Fail("response is not a JSON object: " + line);
        }
        auto id = response.find("id");
        if (id == response.end() || !id->is_number_integer()) {
          Fail("response without integer id: " + line);
        }
        auto slot = slot_of.find(id->get<long>());
        if (slot == slot_of.end() || filled[slot->second]) {
          Fail("response id matches no pending request: " + line);
        }
        if (response.contains("error")) {
          Fail("plug-in reported an error: " + line);
        }
        filled[slot->second] = true;
        responses[slot->second] = std::move(response);
        --remaining;
      }
    }
  }
  return responses;
}

Json PluginProcess::Call(Json request) {
  std::vector<Json> batch;
  batch.push_back(std::move(request));
  return std::move(Exchange(std::move(batch)).front());
}

std::vector<EntitySpan> ParseExtractResponse(const Json &response, std::u32string_view text) {
  const std::string line = Compact(response);
  auto entities = response.find("entities");
  if (entities == response.end() || !entities->is_array()) {
    throw ProtocolViolation("extract response without an entities array: " + line);
  }
  std::vector<EntitySpan> spans;
  for (const auto &e : *entities) {
    if (!e.is_object() || !e.contains("start") || !e.contains("end") || !e.contains("label") ||
        !e["start"].is_number_integer() || !e["end"].is_number_integer() ||
        !e["label"].is_string()) {
      throw ProtocolViolation("malformed entity " + Compact(e) + " in: " + line);
    }
    long start = e["start"].get<long>();
    long end = e["end"].get<long>();
    auto label = TryParseEntityLabel(e["label"].get<std::string>());
    if (!label) throw ProtocolViolation("unknown label in entity " + Compact(e) + " in: " + line);
    if (start < 0 || end <= start || static_cast<size_t>(end) > text.size()) {
      throw ProtocolViolation("entity offsets out of range " + Compact(e) + " in: " + line);
    }
    EntitySpan span;
    span.start = static_cast<size_t>(start);
    span.end = static_cast<size_t>(end);
    span.label = *label;
    span.surface = EncodeUtf8(text.substr(span.start, span.end - span.start));
    if (e.contains("text") && (!e["text"].is_string() || e["text"].get<std::string>() != span.surface)) {
      throw ProtocolViolation("entity text does not match the span " + Compact(e) + " in: " + line);
    }
    if (e.contains("score")) {
      if (!e["score"].is_number()) {
        throw ProtocolViolation("non-numeric score " + Compact(e) + " in: " + line);
      }
      span.confidence = e["score"].get<double>();
    }
    std::string problem = CheckSpan(span, text);
    if (!problem.empty()) throw ProtocolViolation(problem + " " + Compact(e) + " in: " + line);
    spans.push_back(std::move(span));
  }
  return spans;
}

std::vector<EntitySpan> ResolveOverlaps(std::vector<EntitySpan> spans) {
  std::stable_sort(spans.begin(), spans.end(), [](const EntitySpan &a, const EntitySpan &b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  });
  std::vector<EntitySpan> kept;
  for (auto &s : spans) {
    bool clash = std::any_of(kept.begin(), kept.end(), [&](const EntitySpan &k) {
      return s.start < k.end && k.start < s.end;
    });
    if (!clash) kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end(), [](const EntitySpan &a, const EntitySpan &b) {
    return a.start < b.start;
  });
  return kept;
}

}  // namespace instkg
