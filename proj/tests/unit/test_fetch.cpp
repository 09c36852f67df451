#include <doctest.h>

#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include <unistd.h>

#include "reprocheck/error.hpp"
#include "reprocheck/fetch.hpp"

using namespace reprocheck;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("reprocheck_fetch_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int n = 0;
        return n;
    }
    fs::path write(const std::string& name, const std::string& body) const {
        std::ofstream(path / name, std::ios::binary) << body;
        return path / name;
    }
};

/// Serves a fixed map of paths on 127.0.0.1 for the lifetime of the object.
class FixtureServer {
public:
    explicit FixtureServer(std::map<std::string, std::string> files) : files_(std::move(files)) {
        server_.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
            requested_.push_back(req.path);
            const auto it = files_.find(req.path);
            if (it == files_.end()) {
                res.status = 404;
                return;
            }
            res.set_content(it->second, "text/plain");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FixtureServer() {
        server_.stop();
        thread_.join();
    }
    std::string url(const std::string& path) const {
        return "http://127.0.0.1:" + std::to_string(port_) + path;
    }
    const std::vector<std::string>& requested() const { return requested_; }

private:
    std::map<std::string, std::string> files_;
    std::vector<std::string> requested_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace

TEST_CASE("local file is read verbatim") {
    TempDir dir;
    const auto file = dir.write("README.md", "# Title");
    const auto readme = fetch_readme(file.string());
    CHECK(readme.markdown == "# Title");
    CHECK(readme.source_id == file.string());
    CHECK(readme.retrieved_at > 0);
}

TEST_CASE("local errors") {
    TempDir dir;
    CHECK_THROWS_AS(fetch_readme((dir.path / "missing.md").string()), NotFound);
    CHECK_THROWS_AS(fetch_readme(dir.write("README.rst", "Title\n=====").string()), NotMarkdown);
    CHECK_THROWS_AS(fetch_readme(dir.path.string()), NotMarkdown);  // only an .rst present
    TempDir empty;
    CHECK_THROWS_AS(fetch_readme(empty.path.string()), NotFound);
    CHECK_THROWS_AS(fetch_readme(""), NotFound);
}

TEST_CASE("local directory probes candidates in order") {
    TempDir dir;
    dir.write("readme.md", "# lower");
    dir.write("README.markdown", "# markdown");
    CHECK(fetch_readme(dir.path.string()).markdown == "# lower");
    dir.write("README.md", "# upper");
    CHECK(fetch_readme(dir.path.string()).markdown == "# upper");
}

TEST_CASE("invalid UTF-8 in a Readme is repaired") {
    TempDir dir;
    const auto file = dir.write("README.md", "# T\xFF");
    CHECK(fetch_readme(file.string()).markdown == "# T\xEF\xBF\xBD");
}

TEST_CASE("markdown extension set") {
    CHECK(has_markdown_extension("README.md"));
    CHECK(has_markdown_extension("docs/Guide.MARKDOWN"));
    CHECK_FALSE(has_markdown_extension("README.rst"));
    CHECK_FALSE(has_markdown_extension("README"));
}

TEST_CASE("URL probing prefers README.md over readme.md") {
    FixtureServer server({{"/repo/README.md", "# Upper"}, {"/repo/readme.md", "# lower"}});
    const auto readme = fetch_readme(server.url("/repo"));
    CHECK(readme.markdown == "# Upper");
    CHECK(readme.source_id == server.url("/repo/README.md"));
    CHECK(server.requested() == std::vector<std::string>{"/repo/README.md"});
}

TEST_CASE("URL probing walks the candidate list") {
    FixtureServer server(std::map<std::string, std::string>{{"/repo/readme.md", "# lower"}});
    CHECK(fetch_readme(server.url("/repo/")).markdown == "# lower");
    CHECK(server.requested() == std::vector<std::string>{"/repo/README.md", "/repo/Readme.md", "/repo/readme.md"});
}

TEST_CASE("URL errors") {
    FixtureServer server({{"/rst/README.rst", "Title"}, {"/direct/GUIDE.md", "# Guide"}});
    CHECK_THROWS_AS(fetch_readme(server.url("/empty")), NotFound);
    CHECK_THROWS_AS(fetch_readme(server.url("/rst")), NotMarkdown);
    CHECK_THROWS_AS(fetch_readme(server.url("/direct/notes.rst")), NotMarkdown);
    CHECK(fetch_readme(server.url("/direct/GUIDE.md")).markdown == "# Guide");
    CHECK_THROWS_AS(fetch_readme(server.url("/direct/missing.md")), NotFound);
}

TEST_CASE("unreachable host is a NetworkError") {
    int port = 0;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }  // released: nothing listens there now
    FetchOptions options;
    options.timeout = std::chrono::milliseconds(500);
    CHECK_THROWS_AS(fetch_readme("http://127.0.0.1:" + std::to_string(port) + "/repo", options), NetworkError);
}
