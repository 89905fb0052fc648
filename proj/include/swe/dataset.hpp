#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "swe/mlp.hpp"

namespace swe {

// One labeled evaluation row: extracted features plus ground-truth metadata.
struct DataRow {
    std::string participant;
    std::string paradigm;
    std::string condition;
    double time_s = 0.0;
    std::vector<double> features;
    double label = 0.0;
};

// Per-second ground-truth label row (label CSV schema:
// participant_id,paradigm,condition,time_s,label).
struct LabelRow {
    std::string participant;
    std::string paradigm;
    std::string condition;
    double time_s = 0.0;
    double label = 0.0;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

inline double parse_double(const std::string& s, const std::string& path, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected a number, got '" + s + "'");
    }
}

}  // namespace detail

inline std::vector<LabelRow> load_labels_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open label file: " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("label file is empty: " + path);
    std::vector<LabelRow> out;
    std::size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto cols = detail::split_csv_line(line);
        if (cols.size() < 5)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 5 columns, got " + std::to_string(cols.size()));
        out.push_back({cols[0], cols[1], cols[2], detail::parse_double(cols[3], path, line_no),
                       detail::parse_double(cols[4], path, line_no)});
    }
    return out;
}

inline std::vector<std::string> feature_names(FeatureSet fs) {
    std::vector<std::string> names = {"intensity_mean", "intensity_std", "pitch_mean",
                                      "pitch_std",      "vad_mean",      "vad_std",
                                      "syllables_per_second"};
    if (fs == FeatureSet::Resp || fs == FeatureSet::Both) names.push_back("respiration_rate");
    if (fs == FeatureSet::Fillers || fs == FeatureSet::Both) names.push_back("filler_count");
    return names;
}

inline void save_dataset_csv(const std::string& path, const std::vector<DataRow>& rows,
                             FeatureSet fs, const std::string& header_comment = "") {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    if (!header_comment.empty()) f << header_comment << '\n';
    f << "participant_id,paradigm,condition,time_s";
    for (const auto& n : feature_names(fs)) f << ',' << n;
    f << ",label\n";
    f.precision(12);
    for (const auto& r : rows) {
        f << r.participant << ',' << r.paradigm << ',' << r.condition << ',' << r.time_s;
        for (double v : r.features) f << ',' << v;
        f << ',' << r.label << '\n';
    }
}

inline std::vector<DataRow> load_dataset_csv(const std::string& path, FeatureSet fs) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open dataset file: " + path);
    std::string line;
    do {
        if (!std::getline(f, line)) throw std::runtime_error("dataset file is empty: " + path);
    } while (!line.empty() && line[0] == '#');

    const auto header = detail::split_csv_line(line);
    const std::size_t dim = static_cast<std::size_t>(feature_dim(fs));
    if (header.size() != 4 + dim + 1)
        throw std::runtime_error("dataset file: header has " + std::to_string(header.size()) +
                                 " columns, expected " + std::to_string(4 + dim + 1) +
                                 " for feature set '" + feature_set_name(fs) + "'");

    std::vector<DataRow> out;
    std::size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto cols = detail::split_csv_line(line);
        if (cols.size() != header.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": row with " +
                                     std::to_string(cols.size()) + " columns, expected " +
                                     std::to_string(header.size()));
        DataRow r;
        r.participant = cols[0];
        r.paradigm = cols[1];
        r.condition = cols[2];
        r.time_s = detail::parse_double(cols[3], path, line_no);
        for (std::size_t i = 0; i < dim; ++i)
            r.features.push_back(detail::parse_double(cols[4 + i], path, line_no));
        r.label = detail::parse_double(cols[4 + dim], path, line_no);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace swe
