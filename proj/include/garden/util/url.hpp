#pragma once

#include <string>
#include <string_view>

namespace garden {

struct BaseUrl {
    std::string scheme_host_port;  // e.g. "http://127.0.0.1:8080"
    std::string path_prefix;       // e.g. "/v1", never with a trailing slash
};

// Splits "https://api.example.com/v1/" into origin and path prefix.
BaseUrl split_base_url(std::string_view url);

}  // namespace garden
