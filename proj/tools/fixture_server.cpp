#include <CLI11.hpp>

#include <csignal>
#include <iostream>
#include <thread>

#include "fixture_server.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
}

int main(int argc, char** argv) {
  CLI::App app{"Serve or snapshot the fixture site"};
  app.require_subcommand(1);
  std::string routes;
  app.add_option("--routes", routes, "routes.json")->required();

  auto* serve = app.add_subcommand("serve", "serve routes on 127.0.0.1 until interrupted");
  std::string cache_dir;
  std::int64_t fetched_at = 1545140000000;
  auto* seed = app.add_subcommand("seed-cache", "write a response cache covering every route");
  seed->add_option("--cache-dir", cache_dir, "cache directory")->required();
  seed->add_option("--fetched-at", fetched_at, "fetched_at stamp (epoch ms)");
  app.fallthrough();
  CLI11_PARSE(app, argc, argv);

  claimlab::fixture::Server server;
  server.load_routes(routes);
  if (*seed) {
    claimlab::fixture::seed_cache(server, cache_dir, fetched_at);
    std::cout << server.urls().size() << " entries written to " << cache_dir << "\n";
    return 0;
  }
  server.start();
  std::cout << "listening on 127.0.0.1:" << server.port() << "\n";
  for (const auto& o : server.overrides()) std::cout << "--resolve " << o << "\n";
  std::cout.flush();
  std::signal(SIGINT, [](int) { g_stop = 1; });
  std::signal(SIGTERM, [](int) { g_stop = 1; });
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  (void)serve;
  return 0;
}
