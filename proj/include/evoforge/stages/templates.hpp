#pragma once

#include <map>
#include <string>
#include <string_view>

namespace evoforge::stages {

/// Replaces each {name} whose name is in `values`; other braces are kept.
std::string fill_template(std::string_view tmpl, const std::map<std::string, std::string>& values);

/// Placeholders: {task_description} {source} {metrics} {error_trace}
/// {max_insights}
std::string_view default_insights_template();

/// Placeholders: {task_description} {parent_source} {child_source}
/// {parent_metrics} {child_metrics} {primary_metric} {primary_delta}
std::string_view default_lineage_template();

} // namespace evoforge::stages
