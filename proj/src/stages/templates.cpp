#include "evoforge/stages/templates.hpp"

namespace evoforge::stages {

std::string fill_template(std::string_view tmpl, const std::map<std::string, std::string>& values)
{
    std::string out;
    out.reserve(tmpl.size());
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        auto open = tmpl.find('{', pos);
        if (open == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        out.append(tmpl.substr(pos, open - pos));
        auto close = tmpl.find('}', open + 1);
        if (close == std::string_view::npos) {
            out.append(tmpl.substr(open));
            break;
        }
        auto it = values.find(std::string(tmpl.substr(open + 1, close - open - 1)));
        if (it != values.end()) {
            out.append(it->second);
            pos = close + 1;
        } else {
            out.push_back('{');
            pos = open + 1;
        }
    }
    return out;
}

std::string_view default_insights_template()
{
    return R"(You are reviewing one candidate program for the following task.

{task_description}

Program:
```python
{source}
```

Metrics:
{metrics}
Execution errors:
{error_trace}

List up to {max_insights} observations about this program, one per line, in exactly this form:
category [effect] (severity): text
category is one of algorithmic, structural, numerical, other.
effect is one of beneficial, harmful, neutral.
severity is one of low, medium, high.
text is one to three sentences. Output nothing else.
)";
}

std::string_view default_lineage_template()
{
    return R"(Task:
{task_description}

A parent program was changed into a child program.

Parent:
```python
{parent_source}
```
Parent metrics:
{parent_metrics}
Child:
```python
{child_source}
```
Child metrics:
{child_metrics}
The primary metric {primary_metric} changed by {primary_delta} (positive means the child is better).

In two or three sentences, explain which code changes caused this shift.
)";
}

} // namespace evoforge::stages
