#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "benfordscan/error.hpp"
#include "benfordscan/provider.hpp"
#include "support.hpp"

using namespace benfordscan;
using test_support::address;

namespace {

nlohmann::json load_fixture() {
  std::ifstream in(test_support::fixture("provider_fixture.json"));
  return nlohmann::json::parse(in);
}

/// Fails the page at `bad_cursor` a fixed number of times.
class FlakyProvider : public ChainProvider {
 public:
  FlakyProvider(nlohmann::json doc, std::string bad_cursor, int failures)
      : inner_(doc), bad_(std::move(bad_cursor)), failures_(failures) {}

  ProviderPage request(const std::string& a, const std::optional<std::string>& cursor) override {
    ++calls;
    if (cursor.value_or("") == bad_ && failures_ != 0) {
      if (failures_ > 0) --failures_;
      throw TransportError("connection reset");
    }
    return inner_.request(a, cursor);
  }

  int calls = 0;

 private:
  FixtureProvider inner_;
  std::string bad_;
  int failures_;
};

}  // namespace

TEST_CASE("three pages of two records") {
  FixtureProvider provider(load_fixture());
  const auto records = fetch_address_history(provider, address('e'));
  REQUIRE(records.size() == 6);
  CHECK(std::is_sorted(records.begin(), records.end(), block_order));
}

TEST_CASE("duplicate across pages is removed") {
  FixtureProvider provider(load_fixture());
  const auto records = fetch_address_history(provider, address('f'));
  CHECK(records.size() == 3);
}

TEST_CASE("retries recover from transient failures") {
  FlakyProvider provider(load_fixture(), "p2", 2);
  FetchOptions options;
  options.max_retries = 3;
  CHECK(fetch_address_history(provider, address('e'), options).size() == 6);
  CHECK(provider.calls == 5);
}

TEST_CASE("exhausted retries name the cursor") {
  FlakyProvider provider(load_fixture(), "p2", -1);
  FetchOptions options;
  options.max_retries = 2;
  try {
    fetch_address_history(provider, address('e'), options);
    FAIL("expected a fetch error");
  } catch (const FetchError& e) {
    REQUIRE(e.cursor());
    CHECK(*e.cursor() == "p2");
    CHECK(e.address() == address('e'));
    CHECK(std::string(e.what()).find("p2") != std::string::npos);
  }
  CHECK(provider.calls == 4);
}

TEST_CASE("page limit with cursor remaining is partial data") {
  FixtureProvider provider(load_fixture());
  FetchOptions options;
  options.page_limit = 2;
  try {
    fetch_address_history(provider, address('e'), options);
    FAIL("expected partial data");
  } catch (const PartialDataError& e) {
    CHECK(e.records().size() == 4);
    CHECK(e.remaining_cursor() == "p3");
  }
  options.page_limit = 0;
  CHECK_THROWS_AS(fetch_address_history(provider, address('e'), options), ContractError);
}

TEST_CASE("fetch is deterministic") {
  FixtureProvider a(load_fixture()), b(load_fixture());
  CHECK(fetch_address_history(a, address('e')) == fetch_address_history(b, address('e')));
}

TEST_CASE("unknown address has an empty history") {
  FixtureProvider provider(load_fixture());
  CHECK(fetch_address_history(provider, address('9')).empty());
}

TEST_CASE("rate limiter spaces requests") {
  FixtureProvider provider(load_fixture(), std::chrono::milliseconds{20});
  const auto start = std::chrono::steady_clock::now();
  fetch_address_history(provider, address('e'));
  const auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(elapsed >= std::chrono::milliseconds{40});
}

TEST_CASE("page json round trip") {
  const auto doc = load_fixture();
  const auto page = page_from_json(doc.at(address('e')).at(0));
  CHECK(page.records.size() == 2);
  CHECK(page.next_cursor == "p2");
  const auto again = page_from_json(to_json(page));
  CHECK(again.records == page.records);
  CHECK(again.next_cursor == page.next_cursor);
}

TEST_CASE("http adapter maps pages and sends the key") {
  const auto doc = load_fixture();
  httplib::Server server;
  std::string seen_key;
  std::mutex mutex;
  server.Get("/transactions", [&](const httplib::Request& req, httplib::Response& res) {
    {
      std::lock_guard lock(mutex);
      seen_key = req.get_param_value("apikey");
    }
    const auto a = req.get_param_value("address");
    const auto cursor = req.get_param_value("cursor");
    if (a == address('0')) {
      res.status = 500;
      return;
    }
    std::size_t index = 0;
    if (cursor == "p2") index = 1;
    if (cursor == "p3") index = 2;
    res.set_content(doc.at(a).at(index).dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ::setenv("BENFORDSCAN_TEST_KEY", "secret", 1);
  HttpProviderConfig config;
  config.port = port;
  config.api_key_env = "BENFORDSCAN_TEST_KEY";
  HttpProvider provider(config);
  const auto records = fetch_address_history(provider, address('e'));
  CHECK(records.size() == 6);
  {
    std::lock_guard lock(mutex);
    CHECK(seen_key == "secret");
  }

  FetchOptions options;
  options.max_retries = 1;
  CHECK_THROWS_AS(fetch_address_history(provider, address('0'), options), FetchError);

  server.stop();
  thread.join();
}
