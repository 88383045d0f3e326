#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "garden/api/session.hpp"
#include "garden/error.hpp"

namespace httplib {
class Server;
}

namespace garden::api {

// HTTP status for an engine error: 404 unknown target, 409 precondition,
// 422 malformed request, 503 engine or provider unreachable, else 500.
int http_status(ErrorCode code);

// HTTP front end over a workspace directory holding one subdirectory per garden.
//   POST  /gardens                              {id?, config?}
//   POST  /gardens/{g}/seed                     {text}
//   GET   /gardens/{g}
//   GET   /gardens/{g}/nodes/{id}
//   POST  /gardens/{g}/step                     {count?}
//   POST  /gardens/{g}/mode                     {mode: play|pause|step}
//   PATCH /gardens/{g}/nodes/{id}               {is_leaf, submodule?} | {text} | {feedback}
//   POST  /gardens/{g}/nodes/{id}/compile-and-run
//   POST  /gardens/{g}/backups/{b}/restore
//   GET   /gardens/{g}/events?from=<seq>&follow=0|1   (text/event-stream)
class ApiServer {
public:
    ApiServer(std::filesystem::path workspace_root, AppConfig config);
    ~ApiServer();

    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    // Binds (port 0 picks a free port) and returns the bound port.
    int bind(const std::string& host, int port);
    // Serves until stop(); blocks.
    void listen();
    // bind + listen on a background thread.
    int start_background(const std::string& host = "127.0.0.1", int port = 0);
    void stop();

    // Opens (or returns the already open) garden; throws UnknownNode-like MissingFile when absent.
    GardenSession& session(const std::string& garden_id);

private:
    void routes();
    GardenSession& create_session(const std::string& garden_id, const AppConfig& config);

    std::filesystem::path root_;
    AppConfig config_;
    std::unique_ptr<httplib::Server> server_;
    std::mutex mu_;
    std::map<std::string, std::unique_ptr<GardenSession>> sessions_;
    std::atomic<bool> stopping_{false};
    std::thread thread_;
};

bool valid_garden_id(const std::string& id);

}  // namespace garden::api
