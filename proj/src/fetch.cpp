#include "reprocheck/fetch.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "reprocheck/error.hpp"
#include "reprocheck/normalize.hpp"

namespace reprocheck {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMarkdownExtensions[] = {".md", ".markdown", ".mdown", ".mkd", ".mkdn"};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::int64_t now_utc_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::string extension_of(std::string_view name) {
    const auto slash = name.find_last_of('/');
    const auto base = slash == std::string_view::npos ? name : name.substr(slash + 1);
    const auto dot = base.find_last_of('.');
    if (dot == std::string_view::npos || dot == 0) return {};
    return lower(base.substr(dot));
}

RawReadme read_local_file(const fs::path& path) {
    const auto ext = extension_of(path.filename().string());
    if (!ext.empty() && !has_markdown_extension(path.filename().string())) {
        throw NotMarkdown("not a markdown file: " + path.string());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFound("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return RawReadme{path.string(), sanitize_utf8(buffer.str()), now_utc_seconds()};
}

RawReadme fetch_local(std::string_view target) {
    const fs::path path{std::string(target)};
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        for (const auto candidate : kReadmeCandidates) {
            const auto file = path / candidate;
            if (fs::is_regular_file(file, ec)) return read_local_file(file);
        }
        if (fs::exists(path / "README.rst", ec)) {
            throw NotMarkdown("only a reStructuredText Readme exists in " + path.string());
        }
        throw NotFound("no Readme found in " + path.string());
    }
    if (!fs::exists(path, ec)) throw NotFound("no such file or directory: " + path.string());
    return read_local_file(path);
}

struct Url {
    std::string origin;  // scheme://host[:port]
    std::string host;
    std::string path;    // always starts with '/'
};

Url parse_url(std::string_view text) {
    const auto scheme_end = text.find("://");
    const auto authority_start = scheme_end + 3;
    const auto path_start = text.find_first_of("/?#", authority_start);
    Url url;
    url.origin = std::string(text.substr(0, path_start));
    auto authority = text.substr(authority_start, path_start == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : path_start - authority_start);
    if (const auto at = authority.find('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
    const auto colon = authority.find(':');
    url.host = lower(authority.substr(0, colon));
    if (url.host.empty()) throw NotFound("malformed URL: " + std::string(text));
    url.path = path_start == std::string_view::npos ? "/" : std::string(text.substr(path_start));
    if (const auto q = url.path.find_first_of("?#"); q != std::string::npos) url.path.resize(q);
    if (url.path.empty()) url.path = "/";
    return url;
}

bool is_github_host(std::string_view host) {
    return host == "github.com" || host == "www.github.com" || host == "raw.githubusercontent.com";
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos < path.size()) {
        const auto next = path.find('/', pos);
        const auto part = path.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        if (!part.empty()) parts.emplace_back(part);
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

class HttpProber {
public:
    HttpProber(const std::string& origin, const std::string& host, const FetchOptions& options)
        : client_(origin) {
        client_.set_follow_location(true);
        client_.set_connection_timeout(options.timeout);
        client_.set_read_timeout(options.timeout);
        client_.set_write_timeout(options.timeout);
        std::string token = options.token;
        if (token.empty()) {
            if (const char* env = std::getenv(kTokenEnvVar)) token = env;
        }
        // The token never leaves the repository host.
        if (!token.empty() && is_github_host(host)) {
            headers_.emplace("Authorization", "Bearer " + token);
        }
        headers_.emplace("User-Agent", "reprocheck");
    }

    /// Body on 200, nullopt on 404; anything else is a NetworkError.
    std::optional<std::string> get(const std::string& path) {
        auto result = client_.Get(path, headers_);
        if (!result) {
            throw NetworkError("request for " + path + " failed: " + httplib::to_string(result.error()));
        }
        if (result->status == 200) return result->body;
        if (result->status == 404) return std::nullopt;
        throw NetworkError("request for " + path + " returned HTTP " + std::to_string(result->status));
    }

private:
    httplib::Client client_;
    httplib::Headers headers_;
};

RawReadme fetch_remote(std::string_view target, const FetchOptions& options) {
    auto url = parse_url(target);

    std::string origin = url.origin;
    std::string host = url.host;
    std::string base;  // directory to probe, no trailing slash
    std::optional<std::string> direct_file;

    const auto parts = split_path(url.path);
    if ((host == "github.com" || host == "www.github.com") && parts.size() >= 2) {
        origin = "https://raw.githubusercontent.com";
        host = "raw.githubusercontent.com";
        const auto repo = "/" + parts[0] + "/" + parts[1];
        if (parts.size() >= 5 && parts[2] == "blob") {
            std::string file = repo;
            for (std::size_t i = 3; i < parts.size(); ++i) file += "/" + parts[i];
            direct_file = file;
        } else if (parts.size() >= 4 && parts[2] == "tree") {
            base = repo;
            for (std::size_t i = 3; i < parts.size(); ++i) base += "/" + parts[i];
        } else {
            base = repo + "/HEAD";
        }
    } else if (!parts.empty() && !extension_of(parts.back()).empty()) {
        direct_file = url.path;
    } else {
        base = url.path;
        while (!base.empty() && base.back() == '/') base.pop_back();
    }

    HttpProber prober(origin, host, options);
    if (direct_file) {
        if (!has_markdown_extension(*direct_file)) {
            throw NotMarkdown("not a markdown file: " + std::string(target));
        }
        auto body = prober.get(*direct_file);
        if (!body) throw NotFound("no Readme at " + std::string(target));
        return RawReadme{std::string(target), sanitize_utf8(*body), now_utc_seconds()};
    }

    for (const auto candidate : kReadmeCandidates) {
        if (auto body = prober.get(base + "/" + std::string(candidate))) {
            return RawReadme{origin + base + "/" + std::string(candidate), sanitize_utf8(*body),
                             now_utc_seconds()};
        }
    }
    if (prober.get(base + "/README.rst")) {
        throw NotMarkdown("only a reStructuredText Readme exists at " + std::string(target));
    }
    throw NotFound("no Readme found at " + std::string(target));
}

}  // namespace

bool has_markdown_extension(std::string_view path) {
    const auto ext = extension_of(path);
    return std::find(std::begin(kMarkdownExtensions), std::end(kMarkdownExtensions), ext) !=
           std::end(kMarkdownExtensions);
}

RawReadme fetch_readme(std::string_view target, const FetchOptions& options) {
    if (target.empty()) throw NotFound("empty target");
    const auto scheme = lower(target.substr(0, std::min<std::size_t>(target.size(), 8)));
    if (scheme.starts_with("http://") || scheme.starts_with("https://")) {
        return fetch_remote(target, options);
    }
    return fetch_local(target);
}

}  // namespace reprocheck
