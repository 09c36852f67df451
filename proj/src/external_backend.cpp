#include "reprocheck/external_backend.hpp"

#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "reprocheck/error.hpp"

namespace reprocheck {

using json = nlohmann::ordered_json;

namespace wire {

std::string encode_request(std::string_view id, std::string_view text,
                           const std::vector<std::string>& labels) {
    json request;
    request["id"] = std::string(id);
    request["text"] = std::string(text);
    request["labels"] = labels;
    return request.dump(-1, ' ', false, json::error_handler_t::replace);
}

Request decode_request(std::string_view line) {
    json doc;
    try {
        doc = json::parse(line);
    } catch (const json::parse_error& e) {
        throw BackendError(std::string("malformed request: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_string() || !doc.contains("text") ||
        !doc["text"].is_string() || !doc.contains("labels") || !doc["labels"].is_array()) {
        throw BackendError("malformed request: expected {\"id\", \"text\", \"labels\"}");
    }
    Request request{doc["id"].get<std::string>(), doc["text"].get<std::string>(), {}};
    for (const auto& label : doc["labels"]) {
        if (!label.is_string()) throw BackendError("malformed request: labels must be strings");
        request.labels.push_back(label.get<std::string>());
    }
    return request;
}

std::string encode_response(std::string_view id, const std::vector<double>& scores) {
    json response;
    response["id"] = std::string(id);
    response["scores"] = scores;
    return response.dump();
}

std::vector<double> decode_response(std::string_view line, std::string_view expected_id,
                                    std::size_t expected_count, std::size_t line_number) {
    const auto fail = [line_number](const std::string& why) {
        return BackendError("malformed backend response on line " + std::to_string(line_number) +
                            ": " + why);
    };
    json doc;
    try {
        doc = json::parse(line);
    } catch (const json::parse_error& e) {
        throw fail(std::string("not a single JSON object (") + e.what() + ")");
    }
    if (!doc.is_object()) throw fail("not a JSON object");
    if (!doc.contains("id") || !doc["id"].is_string()) throw fail("missing string \"id\"");
    if (doc["id"].get<std::string>() != expected_id) {
        throw fail("id \"" + doc["id"].get<std::string>() + "\" does not match request id \"" +
                   std::string(expected_id) + "\"");
    }
    if (!doc.contains("scores") || !doc["scores"].is_array()) throw fail("missing \"scores\" array");
    const auto& raw = doc["scores"];
    if (raw.size() != expected_count) {
        throw fail("expected " + std::to_string(expected_count) + " scores, got " +
                   std::to_string(raw.size()));
    }
    std::vector<double> scores;
    scores.reserve(raw.size());
    for (const auto& value : raw) {
        if (!value.is_number()) throw fail("non-numeric score");
        const double s = value.get<double>();
        if (!std::isfinite(s) || s < 0.0 || s > 1.0) throw fail("score outside [0,1]");
        scores.push_back(s);
    }
    return scores;
}

}  // namespace wire

namespace {

void ignore_sigpipe() {
    // A backend that dies mid-request must surface as EPIPE, not kill us.
    static std::once_flag once;
    std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

std::string errno_text() { return std::strerror(errno); }

}  // namespace

ExternalClassifier::ExternalClassifier(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
    if (command_.find_first_not_of(" \t") == std::string::npos) {
        throw BackendError("external backend requires a non-empty command");
    }
    ignore_sigpipe();

    int in_pipe[2];
    int out_pipe[2];
    if (pipe2(in_pipe, O_CLOEXEC) != 0) throw BackendError("pipe: " + errno_text());
    if (pipe2(out_pipe, O_CLOEXEC) != 0) {
        close(in_pipe[0]);
        close(in_pipe[1]);
        throw BackendError("pipe: " + errno_text());
    }

    pid_ = fork();
    if (pid_ < 0) {
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
        throw BackendError("fork: " + errno_text());
    }
    if (pid_ == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
}

ExternalClassifier::~ExternalClassifier() { shutdown(); }

void ExternalClassifier::shutdown() noexcept {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ <= 0) return;
    // Give the child a moment to exit on EOF before forcing it.
    for (int i = 0; i < 100; ++i) {
        int status = 0;
        const auto r = waitpid(pid_, &status, WNOHANG);
        if (r == pid_ || (r < 0 && errno != EINTR)) {
            pid_ = -1;
            return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    kill(pid_, SIGKILL);
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
}

std::uint64_t ExternalClassifier::requests_sent() const {
    std::lock_guard lock(mutex_);
    return next_id_ - 1;
}

void ExternalClassifier::write_line(const std::string& line) {
    std::string payload = line + "\n";
    std::size_t written = 0;
    while (written < payload.size()) {
        const auto n = write(to_child_, payload.data() + written, payload.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            broken_ = true;
            throw BackendError("cannot write to backend '" + command_ + "': " + errno_text());
        }
        written += static_cast<std::size_t>(n);
    }
}

std::optional<std::string> ExternalClassifier::read_line() {
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    for (;;) {
        if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (remaining.count() <= 0) return std::nullopt;
        pollfd pfd{from_child_, POLLIN, 0};
        const int ready = poll(&pfd, 1, static_cast<int>(remaining.count()));
        if (ready < 0) {
            if (errno == EINTR) continue;
            throw BackendError("poll: " + errno_text());
        }
        if (ready == 0) return std::nullopt;
        char chunk[4096];
        const auto n = read(from_child_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw BackendError("read: " + errno_text());
        }
        if (n == 0) {
            broken_ = true;
            throw BackendError("backend '" + command_ + "' closed its output before line " +
                               std::to_string(lines_read_ + 1));
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

std::vector<double> ExternalClassifier::score(const std::string& normalized, const Template& tmpl) {
    std::lock_guard lock(mutex_);
    if (broken_) throw BackendError("backend '" + command_ + "' is no longer usable");

    const auto id = std::to_string(next_id_++);
    write_line(wire::encode_request(id, normalized, tmpl.labels()));
    auto line = read_line();
    if (!line) {
        broken_ = true;
        throw BackendError("backend '" + command_ + "' timed out waiting for line " +
                           std::to_string(lines_read_ + 1));
    }
    ++lines_read_;
    try {
        return wire::decode_response(*line, id, tmpl.size(), lines_read_);
    } catch (const BackendError&) {
        // The stream can no longer be trusted to stay in lockstep.
        broken_ = true;
        throw;
    }
}

}  // namespace reprocheck
