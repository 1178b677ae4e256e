#pragma once

// JSON interchange for StudyDataset.
//
//   {
//     "images": [{
//       "id": "img-001", "width": 1024, "height": 768,
//       "teeth": [{"id": "36", "polygon": [[x, y], ...]}],
//       "groundTruth": [{"type": "caries", "box": [x_min, y_min, x_max, y_max]}],
//       // or, for two-out-of-three voting:
//       "expertSets": [[{"type": ..., "box": [...]}], [...], [...]],
//       "control": [{"type": ..., "box": [...], "confidence": 80, "reader": "R1"}],
//       "study":   [{"type": ..., "box": [...], "confidence": 0, "reader": "R1", "origin": "ai"}]
//     }]
//   }
//
// Coordinates are integers; boxes are half-open. "origin" is "reader" (default)
// or "ai". Expert confidences are accepted and ignored.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pairedval/annotation.hpp"

namespace pairedval {

// Throws InputError naming the JSON pointer of the first malformed element.
StudyDataset dataset_from_json(const nlohmann::json& doc);
nlohmann::json dataset_to_json(const StudyDataset& dataset);

// Reads and decodes a dataset file; parse errors become InputError with the
// file name and byte offset.
StudyDataset load_dataset(const std::filesystem::path& path);

}  // namespace pairedval
