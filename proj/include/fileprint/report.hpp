#pragma once

#include <string>

#include "fileprint/pipeline.hpp"

namespace fileprint {

// Aligned table, predicted classes as rows and actual classes as columns.
std::string format_confusion_table(const ConfusionMatrix& cm);

// Same counts as CSV with a header row.
std::string format_confusion_csv(const ConfusionMatrix& cm);

// "accuracy=0.9833\n" style, four decimal places.
std::string format_accuracy_line(double accuracy);

}  // namespace fileprint
