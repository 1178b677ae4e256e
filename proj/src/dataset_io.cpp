#include "pairedval/dataset_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pairedval/error.hpp"

namespace pairedval {

using nlohmann::json;

namespace {

const json& member(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw InputError(path, "expected object");
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError(path + "/" + key, "missing required field");
    return *it;
}

std::int64_t as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw InputError(path, "expected integer");
    return v.get<std::int64_t>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw InputError(path, "expected string");
    return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& path) {
    if (!v.is_array()) throw InputError(path, "expected array");
    return v;
}

BoundingBox parse_box(const json& v, const std::string& path) {
    const json& arr = as_array(v, path);
    if (arr.size() != 4) throw InputError(path, "box needs 4 integers [x_min, y_min, x_max, y_max]");
    return {as_int(arr[0], path + "/0"), as_int(arr[1], path + "/1"), as_int(arr[2], path + "/2"),
            as_int(arr[3], path + "/3")};
}

AnomalyType parse_type(const json& v, const std::string& path) {
    const std::string name = as_string(v, path);
    auto t = parse_anomaly(name);
    if (!t) throw InputError(path, fmt::format("unknown anomaly type '{}'", name));
    return *t;
}

Annotation parse_annotation(const json& v, const std::string& path, Arm arm, bool expert) {
    Annotation a;
    a.anomaly = parse_type(member(v, "type", path), path + "/type");
    a.box = parse_box(member(v, "box", path), path + "/box");
    a.arm = arm;
    if (auto it = v.find("confidence"); it != v.end()) {
        a.confidence.value = static_cast<int>(as_int(*it, path + "/confidence"));
    } else if (!expert) {
        throw InputError(path + "/confidence", "missing required field");
    }
    if (auto it = v.find("reader"); it != v.end()) a.reader_id = as_string(*it, path + "/reader");
    if (auto it = v.find("origin"); it != v.end()) {
        const std::string origin = as_string(*it, path + "/origin");
        if (origin == "ai") {
            a.ai_origin = true;
        } else if (origin != "reader") {
            throw InputError(path + "/origin", "expected \"ai\" or \"reader\"");
        }
    }
    return a;
}

std::vector<Annotation> parse_annotations(const json& obj, const char* key, const std::string& path,
                                          Arm arm) {
    std::vector<Annotation> out;
    auto it = obj.find(key);
    if (it == obj.end()) return out;
    const std::string base = path + "/" + key;
    const json& arr = as_array(*it, base);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(parse_annotation(arr[i], fmt::format("{}/{}", base, i), arm, false));
    }
    return out;
}

ToothRegion parse_tooth(const json& v, const std::string& path) {
    ToothRegion tooth;
    tooth.tooth_id = as_string(member(v, "id", path), path + "/id");
    const std::string ppath = path + "/polygon";
    const json& poly = as_array(member(v, "polygon", path), ppath);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const std::string vpath = fmt::format("{}/{}", ppath, i);
        const json& vertex = as_array(poly[i], vpath);
        if (vertex.size() != 2) throw InputError(vpath, "vertex needs 2 integers [x, y]");
        tooth.polygon.push_back({static_cast<double>(as_int(vertex[0], vpath + "/0")),
                                 static_cast<double>(as_int(vertex[1], vpath + "/1"))});
    }
    return tooth;
}

ImageRecord parse_image(const json& v, const std::string& path) {
    ImageRecord image;
    image.image_id = as_string(member(v, "id", path), path + "/id");
    image.width = as_int(member(v, "width", path), path + "/width");
    image.height = as_int(member(v, "height", path), path + "/height");

    if (auto it = v.find("teeth"); it != v.end()) {
        const json& arr = as_array(*it, path + "/teeth");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            image.teeth.push_back(parse_tooth(arr[i], fmt::format("{}/teeth/{}", path, i)));
        }
    }
    if (auto it = v.find("groundTruth"); it != v.end()) {
        const json& arr = as_array(*it, path + "/groundTruth");
        image.ground_truth.emplace();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string gpath = fmt::format("{}/groundTruth/{}", path, i);
            image.ground_truth->push_back({parse_type(member(arr[i], "type", gpath), gpath + "/type"),
                                           parse_box(member(arr[i], "box", gpath), gpath + "/box")});
        }
    }
    if (auto it = v.find("expertSets"); it != v.end()) {
        const json& sets = as_array(*it, path + "/expertSets");
        image.expert_sets.emplace();
        for (std::size_t e = 0; e < sets.size(); ++e) {
            const std::string spath = fmt::format("{}/expertSets/{}", path, e);
            const json& arr = as_array(sets[e], spath);
            auto& set = image.expert_sets->emplace_back();
            for (std::size_t i = 0; i < arr.size(); ++i) {
                set.push_back(parse_annotation(arr[i], fmt::format("{}/{}", spath, i), Arm::control, true));
            }
        }
    }
    image.control_annotations = parse_annotations(v, "control", path, Arm::control);
    image.study_annotations = parse_annotations(v, "study", path, Arm::study);
    return image;
}

json box_to_json(const BoundingBox& b) { return json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

json annotation_to_json(const Annotation& a) {
    json out = {{"type", to_string(a.anomaly)},
                {"box", box_to_json(a.box)},
                {"confidence", a.confidence.value}};
    if (!a.reader_id.empty()) out["reader"] = a.reader_id;
    if (a.ai_origin) out["origin"] = "ai";
    return out;
}

}  // namespace

StudyDataset dataset_from_json(const json& doc) {
    StudyDataset dataset;
    const json& images = as_array(member(doc, "images", ""), "/images");
    for (std::size_t i = 0; i < images.size(); ++i) {
        dataset.images.push_back(parse_image(images[i], fmt::format("/images/{}", i)));
    }
    return dataset;
}

json dataset_to_json(const StudyDataset& dataset) {
    json images = json::array();
    for (const ImageRecord& image : dataset.images) {
        json img = {{"id", image.image_id}, {"width", image.width}, {"height", image.height}};
        json teeth = json::array();
        for (const ToothRegion& t : image.teeth) {
            json poly = json::array();
            for (const Point& p : t.polygon) {
                poly.push_back({static_cast<std::int64_t>(p.x), static_cast<std::int64_t>(p.y)});
            }
            teeth.push_back({{"id", t.tooth_id}, {"polygon", poly}});
        }
        img["teeth"] = teeth;
        if (image.ground_truth) {
            json gt = json::array();
            for (const auto& g : *image.ground_truth) {
                gt.push_back({{"type", to_string(g.anomaly)}, {"box", box_to_json(g.box)}});
            }
            img["groundTruth"] = gt;
        }
        if (image.expert_sets) {
            json sets = json::array();
            for (const auto& set : *image.expert_sets) {
                json arr = json::array();
                for (const auto& a : set) arr.push_back(annotation_to_json(a));
                sets.push_back(arr);
            }
            img["expertSets"] = sets;
        }
        json control = json::array();
        for (const auto& a : image.control_annotations) control.push_back(annotation_to_json(a));
        json study = json::array();
        for (const auto& a : image.study_annotations) study.push_back(annotation_to_json(a));
        img["control"] = control;
        img["study"] = study;
        images.push_back(img);
    }
    return {{"images", images}};
}

StudyDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path.string(), "cannot open file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw InputError(fmt::format("{}@byte {}", path.string(), e.byte), "malformed JSON");
    }
    try {
        return dataset_from_json(doc);
    } catch (const InputError& e) {
        throw InputError(path.string() + "#" + e.path(), e.detail());
    }
}

}  // namespace pairedval
