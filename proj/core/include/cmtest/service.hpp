#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace cmtest {

struct ServiceOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    /// When set, colormap specs are loaded from and saved to <dir>/<name>.json.
    std::optional<std::filesystem::path> spec_dir;
    /// Evaluation bundles kept in memory.
    std::size_t max_bundles = 8;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

/// Session store and HTTP facade for the design loop:
///   GET    /functions
///   GET    /colormaps                 list names
///   POST   /colormaps                 create (document carries "name")
///   PUT    /colormaps/{name}          create or replace
///   GET    /colormaps/{name}
///   DELETE /colormaps/{name}
///   POST   /evaluate                  {test, colormap, metric, normalization, aggregation}
///   GET    /panels/{bundle}/{panel}   PNG; optional ?agg=
///   GET    /observe/{bundle}?i=&j=
/// Errors are JSON {"error", "fields": [{"field", "message"}]} with 400 for
/// validation, 404 for unknown names and 422 for degenerate evaluations.
class Service {
public:
    explicit Service(ServiceOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Routes one request without any network transport.
    HttpResponse handle(std::string_view method, std::string_view path,
                        const std::map<std::string, std::string>& query, std::string_view body);

    /// Binds (port 0 picks a free port) and returns the bound port.
    int bind();
    /// Serves until stop(). Calls bind() first if needed.
    void listen();
    void stop();
    /// Blocks until the server accepts connections.
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace cmtest
