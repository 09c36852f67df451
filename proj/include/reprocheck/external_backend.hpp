#pragma once

#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <sys/types.h>

#include "reprocheck/classification.hpp"

namespace reprocheck {

/// Line-delimited JSON classifier protocol.
///
///   request:  {"id": "<string>", "text": "<string>", "labels": ["<string>", ...]}
///   response: {"id": "<string>", "scores": [<number in [0,1]>, ...]}
///
/// One object per line, UTF-8; scores align with the request's labels.
namespace wire {

std::string encode_request(std::string_view id, std::string_view text,
                           const std::vector<std::string>& labels);

struct Request {
    std::string id;
    std::string text;
    std::vector<std::string> labels;
};

/// Throws BackendError describing the violation.
Request decode_request(std::string_view line);

std::string encode_response(std::string_view id, const std::vector<double>& scores);

/// Validates shape, id and score range. `line_number` is 1-based and appears
/// in the BackendError message.
std::vector<double> decode_response(std::string_view line, std::string_view expected_id,
                                    std::size_t expected_count, std::size_t line_number);

}  // namespace wire

/// A classifier living in a child process (`/bin/sh -c command`) that speaks
/// the wire protocol on stdin/stdout. Requests from several threads are
/// serialized; ids are correlated per request.
class ExternalClassifier final : public Classifier {
public:
    explicit ExternalClassifier(std::string command,
                                std::chrono::milliseconds timeout = std::chrono::seconds(120));
    ~ExternalClassifier() override;

    ExternalClassifier(const ExternalClassifier&) = delete;
    ExternalClassifier& operator=(const ExternalClassifier&) = delete;

    std::string identifier() const override { return "external"; }

    std::uint64_t requests_sent() const;

protected:
    std::vector<double> score(const std::string& normalized, const Template& tmpl) override;

private:
    void write_line(const std::string& line);
    std::optional<std::string> read_line();
    void shutdown() noexcept;

    std::string command_;
    std::chrono::milliseconds timeout_;
    pid_t pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    std::uint64_t next_id_ = 1;
    std::size_t lines_read_ = 0;
    bool broken_ = false;
    mutable std::mutex mutex_;
};

}  // namespace reprocheck
