#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "benfordscan/provider.hpp"

namespace benfordscan {

HttpProvider::HttpProvider(HttpProviderConfig config)
    : ChainProvider(config.min_request_interval), config_(std::move(config)) {
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key != nullptr && *key != '\0') {
    api_key_ = key;
  }
}

ProviderPage HttpProvider::request(const std::string& address, const std::optional<std::string>& cursor) {
  httplib::Client client(config_.host, config_.port);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);

  httplib::Params params{{"address", address}};
  if (cursor) params.emplace("cursor", *cursor);
  if (api_key_) params.emplace("apikey", *api_key_);

  const auto response = client.Get(config_.path, params, httplib::Headers{});
  if (!response) {
    throw TransportError("HTTP request failed: " + httplib::to_string(response.error()));
  }
  if (response->status != 200) {
    throw TransportError("HTTP status " + std::to_string(response->status));
  }
  try {
    return page_from_json(nlohmann::json::parse(response->body));
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed page body: ") + e.what());
  } catch (const ParseError& e) {
    throw TransportError(std::string("invalid record in page: ") + e.what());
  }
}

}  // namespace benfordscan
