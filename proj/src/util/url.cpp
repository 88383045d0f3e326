#include "garden/util/url.hpp"

#include "garden/error.hpp"

namespace garden {

BaseUrl split_base_url(std::string_view url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) fail(ErrorCode::InvalidConfig, "URL lacks scheme: " + std::string(url));
    auto path_start = url.find('/', scheme_end + 3);
    BaseUrl out;
    if (path_start == std::string_view::npos) {
        out.scheme_host_port = std::string(url);
    } else {
        out.scheme_host_port = std::string(url.substr(0, path_start));
        out.path_prefix = std::string(url.substr(path_start));
        while (!out.path_prefix.empty() && out.path_prefix.back() == '/') out.path_prefix.pop_back();
    }
    if (out.scheme_host_port.size() <= scheme_end + 3) fail(ErrorCode::InvalidConfig, "URL lacks host");
    return out;
}

}  // namespace garden
