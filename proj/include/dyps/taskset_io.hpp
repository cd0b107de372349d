#pragma once

#include <filesystem>
#include <string>

#include "dyps/task_model.hpp"

namespace dyps {

// Task-set files are JSON documents:
//   { "tasks": [ {"id", "wcet", "period", "phase", "kind"}, ... ],
//     "observer_id": n, "victim_id": n, "seed_note": "..." }
// seed_note is optional on input and omitted on output when empty.

std::string taskset_to_json(const TaskSet& ts);
TaskSet taskset_from_json(const std::string& text);

void write_taskset(const std::filesystem::path& path, const TaskSet& ts);
TaskSet read_taskset(const std::filesystem::path& path);

}  // namespace dyps
