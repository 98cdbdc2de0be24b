#include "benfordscan/provider.hpp"

#include <algorithm>
#include <fstream>
#include <thread>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace benfordscan {

using nlohmann::json;

FetchError::FetchError(std::string address, std::optional<std::string> cursor, const std::string& cause)
    : Error("fetch failed for " + address + " at cursor " + (cursor ? "'" + *cursor + "'" : "<first page>") +
            ": " + cause),
      address_(std::move(address)),
      cursor_(std::move(cursor)) {}

PartialDataError::PartialDataError(std::vector<TransactionRecord> records, std::string remaining_cursor)
    : Error("page limit reached with cursor '" + remaining_cursor + "' remaining (" +
            std::to_string(records.size()) + " records fetched)"),
      records_(std::move(records)),
      cursor_(std::move(remaining_cursor)) {}

void RateLimiter::acquire() {
  if (interval_.count() <= 0) return;
  std::unique_lock lock(mutex_);
  const auto now = std::chrono::steady_clock::now();
  if (last_ && now < *last_ + interval_) {
    const auto wake = *last_ + interval_;
    last_ = wake;
    lock.unlock();
    std::this_thread::sleep_until(wake);
    return;
  }
  last_ = now;
}

ProviderPage page_from_json(const json& object) {
  if (!object.is_object() || !object.contains("records") || !object["records"].is_array()) {
    throw TransportError("page body must be an object with a 'records' array");
  }
  ProviderPage page;
  std::size_t index = 0;
  for (const auto& item : object["records"]) {
    page.records.push_back(record_from_json(item, ++index));
  }
  std::sort(page.records.begin(), page.records.end(), block_order);
  if (const auto it = object.find("next_cursor"); it != object.end() && !it->is_null()) {
    page.next_cursor = it->get<std::string>();
  }
  return page;
}

json to_json(const ProviderPage& page) {
  json j;
  j["records"] = json::array();
  for (const auto& r : page.records) j["records"].push_back(to_json(r));
  j["next_cursor"] = page.next_cursor ? json(*page.next_cursor) : json(nullptr);
  return j;
}

FixtureProvider::FixtureProvider(const json& document, std::chrono::milliseconds min_request_interval)
    : ChainProvider(min_request_interval) {
  if (!document.is_object()) {
    throw ContractError("fixture document must map addresses to page lists");
  }
  for (const auto& [address, page_list] : document.items()) {
    auto& by_cursor = pages_[normalize_address(address)];
    std::string cursor;
    for (const auto& item : page_list) {
      ProviderPage page = page_from_json(item);
      const auto next = page.next_cursor;
      by_cursor.emplace(cursor, std::move(page));
      if (!next) break;
      cursor = *next;
    }
  }
}

FixtureProvider FixtureProvider::from_file(const std::filesystem::path& path,
                                           std::chrono::milliseconds min_request_interval) {
  std::ifstream in(path);
  if (!in) {
    throw ContractError("cannot open provider fixture " + path.string());
  }
  return FixtureProvider(json::parse(in), min_request_interval);
}

ProviderPage FixtureProvider::request(const std::string& address, const std::optional<std::string>& cursor) {
  const auto it = pages_.find(normalize_address(address));
  if (it == pages_.end()) {
    if (cursor) throw TransportError("unknown cursor '" + *cursor + "'");
    return {};
  }
  const auto page = it->second.find(cursor.value_or(""));
  if (page == it->second.end()) {
    throw TransportError("unknown cursor '" + cursor.value_or("") + "'");
  }
  return page->second;
}

std::vector<std::string> FixtureProvider::addresses() const {
  std::vector<std::string> out;
  for (const auto& [address, pages] : pages_) out.push_back(address);
  return out;
}

std::vector<TransactionRecord> fetch_address_history(ChainProvider& provider, std::string_view address,
                                                     const FetchOptions& options) {
  if (options.page_limit == 0) {
    throw ContractError("page_limit must be positive");
  }
  const std::string normalized = normalize_address(address);

  std::vector<TransactionRecord> records;
  std::unordered_set<std::string> seen;
  std::optional<std::string> cursor;

  for (std::size_t pages = 0;; ++pages) {
    if (pages == options.page_limit) {
      std::sort(records.begin(), records.end(), block_order);
      throw PartialDataError(std::move(records), *cursor);
    }

    ProviderPage page;
    for (int attempt = 0;; ++attempt) {
      provider.throttle();
      try {
        page = provider.request(normalized, cursor);
        break;
      } catch (const TransportError& e) {
        if (attempt >= options.max_retries) {
          throw FetchError(normalized, cursor, e.what());
        }
        if (options.retry_backoff.count() > 0) {
          std::this_thread::sleep_for(options.retry_backoff * (attempt + 1));
        }
      }
    }

    for (auto& r : page.records) {
      if (seen.insert(r.tx_hash).second) records.push_back(std::move(r));
    }
    if (!page.next_cursor) break;
    cursor = std::move(page.next_cursor);
  }

  std::sort(records.begin(), records.end(), block_order);
  return records;
}

}  // namespace benfordscan
