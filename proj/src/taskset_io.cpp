#include "dyps/taskset_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dyps {

using nlohmann::json;

std::string taskset_to_json(const TaskSet& ts)
{
    json doc;
    doc["tasks"] = json::array();
    for (const auto& t : ts.tasks) {
        doc["tasks"].push_back({{"id", t.id},
                                {"wcet", t.wcet},
                                {"period", t.period},
                                {"phase", t.phase},
                                {"kind", to_string(t.kind)}});
    }
    doc["observer_id"] = ts.observer_id;
    doc["victim_id"] = ts.victim_id;
    if (!ts.seed_note.empty())
        doc["seed_note"] = ts.seed_note;
    return doc.dump(2) + "\n";
}

TaskSet taskset_from_json(const std::string& text)
{
    TaskSet ts;
    try {
        json doc = json::parse(text);
        for (const auto& jt : doc.at("tasks")) {
            TaskSpec t;
            t.id = jt.at("id").get<TaskId>();
            t.wcet = jt.at("wcet").get<Tick>();
            t.period = jt.at("period").get<Tick>();
            t.phase = jt.at("phase").get<Tick>();
            t.kind = task_kind_from_string(jt.value("kind", std::string("periodic")));
            ts.tasks.push_back(t);
        }
        ts.observer_id = doc.at("observer_id").get<TaskId>();
        ts.victim_id = doc.at("victim_id").get<TaskId>();
        ts.seed_note = doc.value("seed_note", std::string());
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed task-set file: ") + e.what());
    }
    return ts;
}

void write_taskset(const std::filesystem::path& path, const TaskSet& ts)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << taskset_to_json(ts);
}

TaskSet read_taskset(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return taskset_from_json(buf.str());
}

}  // namespace dyps
