#include "test_support.hpp"

#include <cmtest/colormap.hpp>
#include <cmtest/io.hpp>
#include <cmtest/service.hpp>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <thread>

using namespace cmtest;
using cmtest::testing::TempDir;
using json = nlohmann::json;

namespace {

std::string gray_doc(const std::string& name)
{
    return serialize_colormap(ColormapSpec({ColormapKey::single(-63, Color::lab(0, 0, 0)),
                                            ColormapKey::single(53, Color::lab(100, 0, 0))}),
                              name);
}

std::string twin_doc(const std::string& name)
{
    return serialize_colormap(ColormapSpec({ColormapKey::single(-63, Color::lab(0, 0, 0)),
                                            ColormapKey::twin(0, Color::lab(54.3, 0, 0), Color::lab(100, 0, 0)),
                                            ColormapKey::single(53, Color::lab(100, 0, 0))}),
                              name);
}

std::string threshold_request(const std::string& cmap)
{
    return json{{"test", {{"function", "threshold"},
                          {"params", {{"m", "-63"}, {"M", "53"}, {"t", "0"}, {"T", "flat"}}},
                          {"size", {60, 40}}}},
                {"colormap", cmap},
                {"metric", "ciede2000"},
                {"normalization", "blackwhite"}}
        .dump();
}

struct Client {
    explicit Client(ServiceOptions options = {}) : service(std::move(options)) {}

    Service service;

    HttpResponse get(const std::string& path, const std::map<std::string, std::string>& q = {})
    {
        return service.handle("GET", path, q, "");
    }
    HttpResponse post(const std::string& path, const std::string& body) { return service.handle("POST", path, {}, body); }
    HttpResponse put(const std::string& path, const std::string& body) { return service.handle("PUT", path, {}, body); }
    HttpResponse del(const std::string& path) { return service.handle("DELETE", path, {}, ""); }
};

} // namespace

TEST(Service, ListsFunctions)
{
    Client c;
    const HttpResponse r = c.get("/functions");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(json::parse(r.body)["functions"].size(), 14u);
}

TEST(Service, ColormapCrud)
{
    Client c;
    EXPECT_EQ(json::parse(c.get("/colormaps").body)["colormaps"].size(), 0u);
    EXPECT_EQ(c.post("/colormaps", gray_doc("gray")).status, 201);
    EXPECT_EQ(c.post("/colormaps", gray_doc("gray")).status, 409);
    EXPECT_EQ(c.put("/colormaps/twin", twin_doc("twin")).status, 201);
    EXPECT_EQ(c.put("/colormaps/twin", twin_doc("twin")).status, 200);
    EXPECT_EQ(json::parse(c.get("/colormaps").body)["colormaps"], json({"gray", "twin"}));

    const HttpResponse got = c.get("/colormaps/twin");
    EXPECT_EQ(got.status, 200);
    EXPECT_EQ(parse_colormap(got.body).spec, parse_colormap(twin_doc("twin")).spec);
    EXPECT_EQ(parse_colormap(got.body).name, "twin");

    EXPECT_EQ(c.put("/colormaps/other", twin_doc("twin")).status, 400);
    EXPECT_EQ(c.post("/colormaps", serialize_colormap(grayscale_uniform(0, 1))).status, 400);
    EXPECT_EQ(c.put("/colormaps/bad name", gray_doc("bad name")).status, 400);
    EXPECT_EQ(c.del("/colormaps/gray").status, 204);
    EXPECT_EQ(c.get("/colormaps/gray").status, 404);
    EXPECT_EQ(c.del("/colormaps/gray").status, 404);
}

TEST(Service, InvalidSpecCitesDuplicatePosition)
{
    Client c;
    const std::string doc = R"({"name":"dup","keys":[
        {"position":0,"left_rgb":[0,0,0],"right_rgb":[0,0,0]},
        {"position":0.5,"left_rgb":[0.5,0.5,0.5],"right_rgb":[0.5,0.5,0.5]},
        {"position":0.5,"left_rgb":[0.6,0.6,0.6],"right_rgb":[0.6,0.6,0.6]},
        {"position":1,"left_rgb":[1,1,1],"right_rgb":[1,1,1]}]})";
    const HttpResponse r = c.post("/colormaps", doc);
    EXPECT_EQ(r.status, 400);
    EXPECT_NE(r.body.find("duplicate key position"), std::string::npos) << r.body;
    const json body = json::parse(r.body);
    EXPECT_TRUE(body.contains("error"));
    EXPECT_EQ(body["fields"][0]["field"], "colormap");
    EXPECT_EQ(c.post("/colormaps", "{not json").status, 400);
}

TEST(Service, EvaluateIsReproducibleAndCached)
{
    Client c;
    c.put("/colormaps/gray", gray_doc("gray"));
    const HttpResponse a = c.post("/evaluate", threshold_request("gray"));
    ASSERT_EQ(a.status, 200) << a.body;
    const HttpResponse b = c.post("/evaluate", threshold_request("gray"));
    const json ja = json::parse(a.body);
    const json jb = json::parse(b.body);
    EXPECT_EQ(ja["bundle"], jb["bundle"]);
    EXPECT_EQ(ja["statistics"], jb["statistics"]);
    EXPECT_EQ(ja["bundle"].get<std::string>().size(), 16u);

    // A fresh service computes the same statistics from the same request.
    Client fresh;
    fresh.put("/colormaps/gray", gray_doc("gray"));
    EXPECT_EQ(json::parse(fresh.post("/evaluate", threshold_request("gray")).body)["statistics"], ja["statistics"]);
}

TEST(Service, EditingSpecChangesBundleAndStatistics)
{
    Client c;
    c.put("/colormaps/map", gray_doc("map"));
    const json before = json::parse(c.post("/evaluate", threshold_request("map")).body);
    const std::string old_id = before["bundle"];
    EXPECT_EQ(c.get("/panels/" + old_id + "/color").status, 200);

    c.put("/colormaps/map", twin_doc("map"));
    EXPECT_EQ(c.get("/panels/" + old_id + "/color").status, 404);
    const json after = json::parse(c.post("/evaluate", threshold_request("map")).body);
    EXPECT_NE(after["bundle"], before["bundle"]);
    EXPECT_GT(after["statistics"]["color"]["max"].get<double>(), before["statistics"]["color"]["max"].get<double>());
    EXPECT_NE(after["statistics"]["color"]["mean"], before["statistics"]["color"]["mean"]);

    c.del("/colormaps/map");
    EXPECT_EQ(c.get("/panels/" + after["bundle"].get<std::string>() + "/color").status, 404);
}

TEST(Service, EvaluateErrors)
{
    Client c;
    c.put("/colormaps/gray", gray_doc("gray"));
    EXPECT_EQ(c.post("/evaluate", threshold_request("missing")).status, 404);

    json req = json::parse(threshold_request("gray"));
    req["test"]["function"] = "nope";
    EXPECT_EQ(c.post("/evaluate", req.dump()).status, 404);

    req = json::parse(threshold_request("gray"));
    req["test"]["params"]["zz"] = "1";
    EXPECT_EQ(c.post("/evaluate", req.dump()).status, 404);

    req = json::parse(threshold_request("gray"));
    req["test"]["params"]["m"] = "abc";
    EXPECT_EQ(c.post("/evaluate", req.dump()).status, 400);

    req = json::parse(threshold_request("gray"));
    req["metric"] = "cie76";
    req["aggregation"] = 3;
    const HttpResponse r = c.post("/evaluate", req.dump());
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(json::parse(r.body)["fields"].size(), 2u);

    req = json::parse(threshold_request("gray"));
    req["test"]["size"] = {5000, 5000};
    EXPECT_EQ(c.post("/evaluate", req.dump()).status, 400);

    req = json::parse(threshold_request("gray"));
    req["test"] = {{"function", "gradient"}, {"size", {1, 1}}};
    const HttpResponse degenerate = c.post("/evaluate", req.dump());
    EXPECT_EQ(degenerate.status, 422);
    EXPECT_TRUE(json::parse(degenerate.body)["degenerate"].get<bool>());

    EXPECT_EQ(c.get("/evaluate").status, 405);
    EXPECT_EQ(c.get("/nowhere").status, 404);
}

TEST(Service, PanelsAndObserver)
{
    Client c;
    c.put("/colormaps/twin", twin_doc("twin"));
    const std::string id = json::parse(c.post("/evaluate", threshold_request("twin")).body)["bundle"];
    for (const char* p : {"grayscale", "mapped", "value", "color", "subtraction"}) {
        const HttpResponse r = c.get("/panels/" + id + "/" + p);
        ASSERT_EQ(r.status, 200) << p;
        EXPECT_EQ(r.content_type, "image/png");
        const Image img = decode_png(r.body);
        EXPECT_EQ(img.width, 60u);
        EXPECT_EQ(img.height, 40u);
    }
    EXPECT_EQ(c.get("/panels/" + id + "/subtraction", {{"agg", "median"}}).status, 200);
    EXPECT_EQ(c.get("/panels/" + id + "/subtraction", {{"agg", "min"}}).status, 400);
    EXPECT_EQ(c.get("/panels/" + id + "/height").status, 404);
    EXPECT_EQ(c.get("/panels/0000000000000000/value").status, 404);

    const HttpResponse o = c.get("/observe/" + id, {{"i", "5"}, {"j", "7"}});
    ASSERT_EQ(o.status, 200);
    const json obs = json::parse(o.body);
    EXPECT_EQ(obs["neighbors"].size(), 8u);
    EXPECT_EQ(json::parse(c.get("/observe/" + id, {{"i", "0"}, {"j", "0"}}).body)["neighbors"].size(), 3u);
    EXPECT_EQ(c.get("/observe/" + id, {{"i", "60"}, {"j", "0"}}).status, 400);
    EXPECT_EQ(c.get("/observe/" + id, {{"i", "1"}}).status, 400);
    EXPECT_EQ(c.get("/observe/" + id, {{"i", "x"}, {"j", "1"}}).status, 400);
}

TEST(Service, BundleCacheIsBounded)
{
    Client c(ServiceOptions{.max_bundles = 2});
    c.put("/colormaps/gray", gray_doc("gray"));
    std::vector<std::string> ids;
    for (int w : {10, 11, 12}) {
        json req = json::parse(threshold_request("gray"));
        req["test"]["size"] = {w, 10};
        ids.push_back(json::parse(c.post("/evaluate", req.dump()).body)["bundle"]);
    }
    EXPECT_EQ(c.get("/panels/" + ids[0] + "/value").status, 404);
    EXPECT_EQ(c.get("/panels/" + ids[1] + "/value").status, 200);
    EXPECT_EQ(c.get("/panels/" + ids[2] + "/value").status, 200);
}

TEST(Service, SpecDirectoryPersists)
{
    TempDir dir;
    {
        Service s(ServiceOptions{.spec_dir = dir.path()});
        EXPECT_EQ(s.handle("PUT", "/colormaps/keep", {}, twin_doc("keep")).status, 201);
        EXPECT_EQ(s.handle("PUT", "/colormaps/gone", {}, gray_doc("gone")).status, 201);
        EXPECT_EQ(s.handle("DELETE", "/colormaps/gone", {}, "").status, 204);
    }
    EXPECT_TRUE(std::filesystem::exists(dir / "keep.json"));
    EXPECT_FALSE(std::filesystem::exists(dir / "gone.json"));
    Service s(ServiceOptions{.spec_dir = dir.path()});
    const HttpResponse r = s.handle("GET", "/colormaps/keep", {}, "");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(parse_colormap(r.body).spec, parse_colormap(twin_doc("keep")).spec);
}

TEST(Service, ServesOverHttp)
{
    Service service(ServiceOptions{.port = 0});
    const int port = service.bind();
    ASSERT_GT(port, 0);
    std::thread server([&] { service.listen(); });
    service.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto put = client.Put("/colormaps/twin", twin_doc("twin"), "application/json");
    ASSERT_TRUE(put);
    EXPECT_EQ(put->status, 201);
    auto eval = client.Post("/evaluate", threshold_request("twin"), "application/json");
    ASSERT_TRUE(eval);
    ASSERT_EQ(eval->status, 200) << eval->body;
    const std::string id = json::parse(eval->body)["bundle"];
    auto png = client.Get("/panels/" + id + "/subtraction");
    ASSERT_TRUE(png);
    EXPECT_EQ(png->status, 200);
    EXPECT_EQ(png->get_header_value("Content-Type"), "image/png");
    auto obs = client.Get("/observe/" + id + "?i=3&j=4");
    ASSERT_TRUE(obs);
    EXPECT_EQ(json::parse(obs->body)["i"], 3);
    auto missing = client.Get("/colormaps/none");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);
    EXPECT_TRUE(json::parse(missing->body).contains("error"));

    service.stop();
    server.join();
}
