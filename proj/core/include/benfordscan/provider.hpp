#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "benfordscan/error.hpp"
#include "benfordscan/ingest.hpp"

namespace benfordscan {

/// One page of an address history as returned by a chain-data API.
struct ProviderPage {
  std::vector<TransactionRecord> records;  // block order within the page
  std::optional<std::string> next_cursor;
};

ProviderPage page_from_json(const nlohmann::json& object);
nlohmann::json to_json(const ProviderPage& page);

/// A single request failed (network, HTTP status, malformed body).
class TransportError : public Error {
 public:
  using Error::Error;
};

/// Retries were exhausted while fetching the page at `cursor`.
class FetchError : public Error {
 public:
  FetchError(std::string address, std::optional<std::string> cursor, const std::string& cause);

  const std::string& address() const noexcept { return address_; }
  const std::optional<std::string>& cursor() const noexcept { return cursor_; }

 private:
  std::string address_;
  std::optional<std::string> cursor_;
};

/// The page limit ran out while the provider still had a cursor. The records
/// gathered so far are attached so the caller can decide to keep them.
class PartialDataError : public Error {
 public:
  PartialDataError(std::vector<TransactionRecord> records, std::string remaining_cursor);

  const std::vector<TransactionRecord>& records() const noexcept { return records_; }
  const std::string& remaining_cursor() const noexcept { return cursor_; }

 private:
  std::vector<TransactionRecord> records_;
  std::string cursor_;
};

/// Enforces a minimum spacing between consecutive acquisitions. Thread-safe.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds min_interval = std::chrono::milliseconds{0})
      : interval_(min_interval) {}

  void acquire();
  std::chrono::milliseconds interval() const noexcept { return interval_; }

 private:
  std::chrono::milliseconds interval_;
  std::mutex mutex_;
  std::optional<std::chrono::steady_clock::time_point> last_;
};

/// Paged access to per-address transaction histories.
///
/// Implementations must be safe to call concurrently for distinct addresses;
/// pagination of a single address is always sequential.
class ChainProvider {
 public:
  explicit ChainProvider(std::chrono::milliseconds min_request_interval = std::chrono::milliseconds{0})
      : limiter_(min_request_interval) {}
  virtual ~ChainProvider() = default;

  ChainProvider(const ChainProvider&) = delete;
  ChainProvider& operator=(const ChainProvider&) = delete;

  /// Fetches the page at `cursor` (first page when empty). Throws
  /// TransportError on failure.
  virtual ProviderPage request(const std::string& address, const std::optional<std::string>& cursor) = 0;

  /// Blocks until the provider's rate limit admits another request.
  void throttle() { limiter_.acquire(); }

 private:
  RateLimiter limiter_;
};

/// Serves pages from a JSON document:
///   { "<address>": [ {"records": [...], "next_cursor": "c1"}, {"records": [...]} ] }
/// Page i > 0 is addressed by page i-1's next_cursor.
class FixtureProvider : public ChainProvider {
 public:
  explicit FixtureProvider(const nlohmann::json& document,
                           std::chrono::milliseconds min_request_interval = std::chrono::milliseconds{0});
  static FixtureProvider from_file(const std::filesystem::path& path,
                                   std::chrono::milliseconds min_request_interval = std::chrono::milliseconds{0});

  ProviderPage request(const std::string& address, const std::optional<std::string>& cursor) override;

  std::vector<std::string> addresses() const;

 private:
  // address -> (cursor or "" for the first page) -> page
  std::map<std::string, std::map<std::string, ProviderPage>> pages_;
};

struct HttpProviderConfig {
  std::string host = "127.0.0.1";
  int port = 80;
  std::string path = "/transactions";
  /// Environment variable holding the API key, sent as the `apikey` query
  /// parameter when set.
  std::string api_key_env = "BENFORDSCAN_API_KEY";
  std::chrono::milliseconds min_request_interval{0};
  std::chrono::seconds timeout{10};
};

/// Plain-HTTP adapter: GET <path>?address=..&cursor=..&apikey=.. returning a
/// ProviderPage JSON body.
class HttpProvider : public ChainProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config);

  ProviderPage request(const std::string& address, const std::optional<std::string>& cursor) override;

 private:
  HttpProviderConfig config_;
  std::optional<std::string> api_key_;
};

struct FetchOptions {
  std::size_t page_limit = 100;
  /// Extra attempts per page after the first failure.
  int max_retries = 3;
  std::chrono::milliseconds retry_backoff{0};
};

/// Walks an address's pages until the cursor runs out, deduplicating on
/// tx_hash and returning the history in block order.
///
/// Throws FetchError when a page keeps failing and PartialDataError when
/// `page_limit` pages were read but a cursor remains.
std::vector<TransactionRecord> fetch_address_history(ChainProvider& provider, std::string_view address,
                                                     const FetchOptions& options = {});

}  // namespace benfordscan
