#include "evoforge/dag/precondition.hpp"

#include "evoforge/core/error.hpp"

namespace evoforge::dag {

using json = nlohmann::json;

namespace {

bool known_op(std::string_view op)
{
    return op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=";
}

void read_comparison(const json& j, Precondition& p)
{
    if (j.contains("equals")) {
        p.op = "==";
        p.value = j["equals"];
    } else {
        p.op = j.value("op", std::string("=="));
        if (!j.contains("value"))
            throw ConfigError("precondition needs 'value' or 'equals'");
        p.value = j["value"];
    }
    if (!known_op(p.op))
        throw ConfigError("unknown precondition operator '" + p.op + "'");
}

} // namespace

std::string Precondition::describe() const
{
    switch (kind) {
    case Kind::Always:
        return "always";
    case Kind::Exists:
        return "exists(" + stage + ")";
    case Kind::Compare:
        return stage + (field.empty() ? "" : "." + field) + " " + op + " " + value.dump();
    case Kind::Metric:
        return "metric " + field + " " + op + " " + value.dump();
    }
    return "?";
}

Precondition precondition_from_json(const json& j)
{
    Precondition p;
    if (j.is_null() || (j.is_string() && j.get<std::string>() == "always"))
        return p;
    if (!j.is_object())
        throw ConfigError("precondition must be 'always' or a mapping, got " + j.dump());
    if (j.contains("exists")) {
        p.kind = Precondition::Kind::Exists;
        p.stage = j["exists"].get<std::string>();
        return p;
    }
    if (j.contains("metric")) {
        p.kind = Precondition::Kind::Metric;
        p.field = j["metric"].get<std::string>();
        read_comparison(j, p);
        return p;
    }
    if (j.contains("stage")) {
        p.kind = Precondition::Kind::Compare;
        p.stage = j["stage"].get<std::string>();
        p.field = j.value("field", std::string());
        read_comparison(j, p);
        return p;
    }
    throw ConfigError("unrecognized precondition " + j.dump());
}

json precondition_to_json(const Precondition& p)
{
    switch (p.kind) {
    case Precondition::Kind::Always:
        return "always";
    case Precondition::Kind::Exists:
        return json{{"exists", p.stage}};
    case Precondition::Kind::Compare: {
        json j{{"stage", p.stage}, {"op", p.op}, {"value", p.value}};
        if (!p.field.empty())
            j["field"] = p.field;
        return j;
    }
    case Precondition::Kind::Metric:
        return json{{"metric", p.field}, {"op", p.op}, {"value", p.value}};
    }
    return "always";
}

const json* find_path(const json& root, std::string_view dotted)
{
    const json* cur = &root;
    while (!dotted.empty()) {
        auto dot = dotted.find('.');
        auto key = dotted.substr(0, dot);
        if (!cur->is_object())
            return nullptr;
        auto it = cur->find(key);
        if (it == cur->end())
            return nullptr;
        cur = &*it;
        dotted = dot == std::string_view::npos ? std::string_view{} : dotted.substr(dot + 1);
    }
    return cur;
}

bool compare_json(const json& actual, std::string_view op, const json& expected)
{
    if (!known_op(op))
        throw ConfigError("unknown precondition operator '" + std::string(op) + "'");
    if (actual.is_number() && expected.is_number()) {
        const double a = actual.get<double>();
        const double b = expected.get<double>();
        if (op == "==")
            return a == b;
        if (op == "!=")
            return a != b;
        if (op == "<")
            return a < b;
        if (op == "<=")
            return a <= b;
        if (op == ">")
            return a > b;
        return a >= b;
    }
    if (op == "==")
        return actual == expected;
    if (op == "!=")
        return actual != expected;
    return false;
}

} // namespace evoforge::dag
