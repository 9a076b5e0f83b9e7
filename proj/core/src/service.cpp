#include "cmtest/service.hpp"

#include "cmtest/catalog.hpp"
#include "cmtest/colormap.hpp"
#include "cmtest/errors.hpp"
#include "cmtest/evaluation.hpp"
#include "cmtest/io.hpp"
#include "cmtest/render.hpp"
#include "cmtest/report.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <charconv>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <vector>

namespace cmtest {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxPixels = 4096 * 4096;

struct FieldError {
    std::string field;
    std::string message;
};

// Carries a finished error response out of nested validation code.
struct RequestError {
    int status;
    std::string message;
    std::vector<FieldError> fields;
};

HttpResponse json_response(int status, const json& body) { return {status, "application/json", body.dump(2) + "\n"}; }

HttpResponse error_response(const RequestError& e)
{
    json fields = json::array();
    for (const FieldError& f : e.fields) fields.push_back({{"field", f.field}, {"message", f.message}});
    return json_response(e.status, {{"error", e.message}, {"fields", fields}});
}

[[noreturn]] void fail(int status, std::string message, std::vector<FieldError> fields = {})
{
    throw RequestError{status, std::move(message), std::move(fields)};
}

bool valid_name(std::string_view name)
{
    if (name.empty() || name.size() > 64 || name.front() == '.') return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    return true;
}

std::vector<std::string_view> split_path(std::string_view path)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        std::size_t slash = path.find('/', start);
        if (slash == std::string_view::npos) slash = path.size();
        if (slash > start) parts.push_back(path.substr(start, slash - start));
        start = slash + 1;
    }
    return parts;
}

json parse_body(std::string_view body)
{
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        fail(400, "request body is not valid JSON", {{"body", e.what()}});
    }
}

std::size_t index_param(const std::map<std::string, std::string>& query, const std::string& key)
{
    const auto it = query.find(key);
    if (it == query.end()) fail(400, "missing query parameter", {{key, "required"}});
    std::size_t v = 0;
    const std::string& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(400, "bad query parameter", {{key, "not an index"}});
    return v;
}

struct StoredSpec {
    ColormapSpec spec;
    std::uint64_t revision;
};

struct BundleEntry {
    std::string id;
    std::string colormap_name;
    EvaluationBundle bundle;
    std::mutex panel_mutex;
    std::map<std::string, std::shared_ptr<const std::string>> panels;
};

} // namespace

struct Service::Impl {
    ServiceOptions options;
    httplib::Server server;
    bool bound = false;

    std::shared_mutex spec_mutex;
    std::map<std::string, StoredSpec> specs;
    std::uint64_t next_revision = 1;

    std::mutex bundle_mutex;
    std::deque<std::shared_ptr<BundleEntry>> bundles; // most recent last

    explicit Impl(ServiceOptions opts) : options(std::move(opts)) { load_spec_dir(); }

    void load_spec_dir()
    {
        if (!options.spec_dir) return;
        std::filesystem::create_directories(*options.spec_dir);
        for (const auto& entry : std::filesystem::directory_iterator(*options.spec_dir)) {
            if (entry.path().extension() != ".json") continue;
            const std::string name = entry.path().stem().string();
            if (!valid_name(name)) continue;
            ParsedColormap parsed = parse_colormap(read_file(entry.path()));
            specs.insert_or_assign(name, StoredSpec{std::move(parsed.spec), next_revision++});
        }
    }

    std::filesystem::path spec_path(const std::string& name) const { return *options.spec_dir / (name + ".json"); }

    void drop_bundles_for(const std::string& name)
    {
        std::lock_guard lock(bundle_mutex);
        std::erase_if(bundles, [&](const auto& b) { return b->colormap_name == name; });
    }

    ParsedColormap parse_spec_body(std::string_view body)
    {
        try {
            return parse_colormap(body);
        } catch (const ValidationError& e) {
            fail(400, "invalid colormap", {{"colormap", e.what()}});
        }
    }

    HttpResponse store_spec(const std::string& name, ColormapSpec spec, bool must_be_new,
                            const std::vector<std::string>& warnings)
    {
        if (!valid_name(name))
            fail(400, "invalid colormap name", {{"name", "use 1-64 characters from [A-Za-z0-9_.-]"}});
        bool created = false;
        {
            std::unique_lock lock(spec_mutex);
            const bool exists = specs.count(name) > 0;
            if (must_be_new && exists) fail(409, "colormap '" + name + "' already exists; use PUT to replace it");
            if (options.spec_dir) write_file_atomic(spec_path(name), serialize_colormap(spec, name));
            specs.insert_or_assign(name, StoredSpec{std::move(spec), next_revision++});
            created = !exists;
        }
        drop_bundles_for(name);
        return json_response(created ? 201 : 200, {{"name", name}, {"warnings", warnings}});
    }

    HttpResponse colormaps(std::string_view method, const std::vector<std::string_view>& parts, std::string_view body)
    {
        if (parts.size() == 1) {
            if (method == "GET") {
                std::shared_lock lock(spec_mutex);
                json names = json::array();
                for (const auto& [name, stored] : specs) names.push_back(name);
                return json_response(200, {{"colormaps", names}});
            }
            if (method == "POST") {
                ParsedColormap parsed = parse_spec_body(body);
                if (!parsed.name) fail(400, "colormap document needs a name", {{"name", "required"}});
                return store_spec(*parsed.name, std::move(parsed.spec), true, parsed.warnings);
            }
            fail(405, "method not allowed");
        }
        if (parts.size() != 2) fail(404, "not found");
        const std::string name(parts[1]);
        if (method == "PUT") {
            ParsedColormap parsed = parse_spec_body(body);
            if (parsed.name && *parsed.name != name)
                fail(400, "name in document does not match the URL", {{"name", "expected '" + name + "'"}});
            return store_spec(name, std::move(parsed.spec), false, parsed.warnings);
        }
        if (method == "GET") {
            std::shared_lock lock(spec_mutex);
            const auto it = specs.find(name);
            if (it == specs.end()) fail(404, "unknown colormap '" + name + "'", {{"name", "not found"}});
            return {200, "application/json", serialize_colormap(it->second.spec, name)};
        }
        if (method == "DELETE") {
            {
                std::unique_lock lock(spec_mutex);
                if (!specs.erase(name)) fail(404, "unknown colormap '" + name + "'", {{"name", "not found"}});
                if (options.spec_dir) std::filesystem::remove(spec_path(name));
            }
            drop_bundles_for(name);
            return {204, "application/json", ""};
        }
        fail(405, "method not allowed");
    }

    HttpResponse evaluate_request(std::string_view body)
    {
        const json req = parse_body(body);
        if (!req.is_object()) fail(400, "request body must be an object", {{"body", "expected an object"}});

        std::vector<FieldError> errors;
        std::optional<TestSpec> test;
        EvaluationOptions opts;
        std::string cmap_name;
        bool unknown_name = false;

        auto string_field = [&](const char* key, const char* fallback) -> std::optional<std::string> {
            if (!req.contains(key)) {
                if (fallback) return std::string(fallback);
                errors.push_back({key, "required"});
                return std::nullopt;
            }
            if (!req[key].is_string()) {
                errors.push_back({key, "must be a string"});
                return std::nullopt;
            }
            return req[key].get<std::string>();
        };

        try {
            if (!req.contains("test")) throw ValidationError("required");
            test = test_spec_from_json(req["test"]);
            if (test->resolution.width * test->resolution.height > kMaxPixels)
                throw ValidationError("at most 4096x4096 pixels per evaluation");
        } catch (const UnknownNameError& e) {
            unknown_name = true;
            errors.push_back({"test", e.what()});
        } catch (const ValidationError& e) {
            errors.push_back({"test", e.what()});
        }
        if (auto v = string_field("colormap", nullptr)) cmap_name = *v;
        try {
            if (auto v = string_field("metric", "ciede2000")) opts.metric = parse_metric(*v);
        } catch (const ValidationError& e) {
            errors.push_back({"metric", e.what()});
        }
        try {
            if (auto v = string_field("normalization", "minmax")) opts.normalization = parse_normalization(*v);
        } catch (const ValidationError& e) {
            errors.push_back({"normalization", e.what()});
        }
        try {
            if (auto v = string_field("aggregation", "max")) opts.aggregation = parse_aggregation(*v);
        } catch (const ValidationError& e) {
            errors.push_back({"aggregation", e.what()});
        }
        if (!errors.empty()) fail(unknown_name ? 404 : 400, "invalid evaluation request", std::move(errors));

        std::optional<ColormapSpec> cmap;
        {
            std::shared_lock lock(spec_mutex);
            const auto it = specs.find(cmap_name);
            if (it == specs.end())
                fail(404, "unknown colormap '" + cmap_name + "'", {{"colormap", "not found; create it first"}});
            cmap = it->second.spec;
        }

        const json canonical{{"test", to_json(*test)},
                             {"colormap", serialize_colormap(*cmap)},
                             {"metric", std::string(to_string(opts.metric))},
                             {"normalization", to_string(opts.normalization)},
                             {"aggregation", std::string(to_string(opts.aggregation))}};
        const std::string id = sha256_hex(canonical.dump()).substr(0, 16);

        std::shared_ptr<BundleEntry> entry = find_bundle(id);
        std::vector<std::string> warnings;
        if (!entry) {
            GeneratedField generated;
            try {
                generated = generate(*test);
            } catch (const UnknownNameError& e) {
                fail(404, "invalid test", {{"test", e.what()}});
            } catch (const ValidationError& e) {
                fail(400, "invalid test", {{"test", e.what()}});
            }
            warnings = generated.warnings;
            entry = std::make_shared<BundleEntry>(id, cmap_name,
                                                  evaluate(std::move(generated.field), *cmap, opts, test));
            remember(entry, cmap_name);
        }

        const EvaluationBundle& b = entry->bundle;
        json out{{"bundle", id},
                 {"statistics", statistics_json(b)},
                 {"warnings", warnings},
                 {"degenerate", b.degenerate()}};
        if (b.degenerate()) {
            out["error"] = "degenerate normalization: every neighbor difference is zero";
            std::vector<FieldError> fields;
            if (b.value.degenerate) fields.push_back({"value", "constant field"});
            if (b.color.degenerate) fields.push_back({"color", "all mapped colors equal"});
            json f = json::array();
            for (const auto& e : fields) f.push_back({{"field", e.field}, {"message", e.message}});
            out["fields"] = f;
            return json_response(422, out);
        }
        return json_response(200, out);
    }

    std::shared_ptr<BundleEntry> find_bundle(const std::string& id)
    {
        std::lock_guard lock(bundle_mutex);
        for (auto it = bundles.begin(); it != bundles.end(); ++it) {
            if ((*it)->id == id) {
                auto found = *it;
                bundles.erase(it);
                bundles.push_back(found);
                return found;
            }
        }
        return nullptr;
    }

    void remember(std::shared_ptr<BundleEntry> entry, const std::string& cmap_name)
    {
        // A spec edited while this evaluation ran must not leave a stale entry behind.
        std::shared_lock spec_lock(spec_mutex);
        const auto it = specs.find(cmap_name);
        if (it == specs.end() || !(it->second.spec == entry->bundle.colormap)) return;
        std::lock_guard lock(bundle_mutex);
        std::erase_if(bundles, [&](const auto& b) { return b->id == entry->id; });
        bundles.push_back(std::move(entry));
        while (bundles.size() > std::max<std::size_t>(options.max_bundles, 1)) bundles.pop_front();
    }

    std::shared_ptr<BundleEntry> require_bundle(std::string_view id)
    {
        auto entry = find_bundle(std::string(id));
        if (!entry) fail(404, "unknown bundle '" + std::string(id) + "'", {{"bundle", "not found or expired"}});
        return entry;
    }

    HttpResponse panel(std::string_view bundle_id, std::string_view panel_name,
                       const std::map<std::string, std::string>& query)
    {
        auto entry = require_bundle(bundle_id);
        Panel p{};
        try {
            p = parse_panel(panel_name);
        } catch (const UnknownNameError& e) {
            fail(404, e.what(), {{"panel", "unknown"}});
        }
        Aggregation how = entry->bundle.options.aggregation;
        if (auto it = query.find("agg"); it != query.end()) {
            try {
                how = parse_aggregation(it->second);
            } catch (const ValidationError& e) {
                fail(400, "invalid aggregation", {{"agg", e.what()}});
            }
        }
        const std::string key = std::string(to_string(p)) + "/" + std::string(to_string(how));
        std::lock_guard lock(entry->panel_mutex);
        auto& png = entry->panels[key];
        if (!png) png = std::make_shared<const std::string>(encode_png(render_panel(entry->bundle, p, how)));
        return {200, "image/png", *png};
    }

    HttpResponse observe(std::string_view bundle_id, const std::map<std::string, std::string>& query)
    {
        auto entry = require_bundle(bundle_id);
        const std::size_t i = index_param(query, "i");
        const std::size_t j = index_param(query, "j");
        try {
            return json_response(200, to_json(pixel_observer(entry->bundle, i, j)));
        } catch (const ValidationError& e) {
            fail(400, "pixel out of bounds", {{"i", e.what()}, {"j", e.what()}});
        }
    }

    HttpResponse route(std::string_view method, std::string_view path, const std::map<std::string, std::string>& query,
                       std::string_view body)
    {
        const auto parts = split_path(path);
        if (parts.empty()) fail(404, "not found");
        const std::string_view head = parts[0];
        if (head == "functions" && parts.size() == 1) {
            if (method != "GET") fail(405, "method not allowed");
            return json_response(200, catalog_json());
        }
        if (head == "colormaps") return colormaps(method, parts, body);
        if (head == "evaluate" && parts.size() == 1) {
            if (method != "POST") fail(405, "method not allowed");
            return evaluate_request(body);
        }
        if (head == "panels" && parts.size() == 3) {
            if (method != "GET") fail(405, "method not allowed");
            return panel(parts[1], parts[2], query);
        }
        if (head == "observe" && parts.size() == 2) {
            if (method != "GET") fail(405, "method not allowed");
            return observe(parts[1], query);
        }
        fail(404, "no route for " + std::string(path));
    }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options)))
{
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> query;
        for (const auto& [k, v] : req.params) query[k] = v;
        const HttpResponse r = handle(req.method, req.path, query, req.body);
        res.status = r.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        if (!r.body.empty()) res.set_content(r.body, r.content_type);
    };
    auto& s = impl_->server;
    s.Get(".*", dispatch);
    s.Post(".*", dispatch);
    s.Put(".*", dispatch);
    s.Delete(".*", dispatch);
    s.Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
}

Service::~Service() { stop(); }

HttpResponse Service::handle(std::string_view method, std::string_view path,
                             const std::map<std::string, std::string>& query, std::string_view body)
{
    try {
        return impl_->route(method, path, query, body);
    } catch (const RequestError& e) {
        return error_response(e);
    } catch (const UnknownNameError& e) {
        return error_response({404, e.what(), {}});
    } catch (const ValidationError& e) {
        return error_response({400, e.what(), {}});
    } catch (const std::exception& e) {
        return error_response({500, std::string("internal error: ") + e.what(), {}});
    }
}

int Service::bind()
{
    auto& o = impl_->options;
    if (impl_->bound) return o.port;
    if (o.port == 0) {
        o.port = impl_->server.bind_to_any_port(o.host);
        if (o.port < 0) throw IoError("cannot bind " + o.host);
    } else if (!impl_->server.bind_to_port(o.host, o.port)) {
        throw IoError("cannot bind " + o.host + ":" + std::to_string(o.port));
    }
    impl_->bound = true;
    return o.port;
}

void Service::listen()
{
    bind();
    impl_->server.listen_after_bind();
}

void Service::stop() { impl_->server.stop(); }

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

} // namespace cmtest
