// Copyright 2026 The clx authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <utility>

#include "clx/session.hpp"

namespace httplib {
class Server;
}

namespace clx {

// POST /sessions
// GET  /sessions/{id}/hierarchy
// POST /sessions/{id}/target        {"cluster": n} | {"pattern": "..."}
// GET  /sessions/{id}/program
// GET  /sessions/{id}/preview?limit=&branch=
// POST /sessions/{id}/repair        {"source": "...", "index": n}
// GET  /sessions/{id}/export?format=script|transformed-data|program-json
// Errors come back as {"error": code, "detail": message} with a 4xx status.
void register_routes(httplib::Server& server, SessionService& service);

// "host:port" or ":port" or "port". Throws std::invalid_argument.
std::pair<std::string, int> parse_listen(const std::string& listen);

// Serves until the process is stopped. Returns false if the address
// cannot be bound.
bool serve(SessionService& service, const std::string& listen, std::ostream& log);

}  // namespace clx
