#ifndef RLOCI_IO_HPP
#define RLOCI_IO_HPP

#include <string>
#include <vector>

#include "rloci/bench.hpp"
#include "rloci/sensitivity.hpp"
#include "rloci/tracer.hpp"

namespace rloci {

/// Plant spec file: JSON object in coefficient form
///   {"num": [...], "den": [...], "order": "asc"|"desc"}
/// or zero-pole-gain form
///   {"zeros": [...], "poles": [...], "gain": g}
/// The two forms are mutually exclusive; "order" is mandatory in
/// coefficient form. Complex entries in zeros/poles are written as
/// [re, im]; bare numbers are real. Format violations throw
/// std::invalid_argument (usage errors); degenerate plants propagate
/// rloci::Error (numeric errors).
RationalTF parse_plant(const std::string& json_text);
RationalTF load_plant(const std::string& path);

/// Parameter model file:
///   {"order": "asc"|"desc",
///    "params": [{"name": .., "value": .., "kind":
///                "dynamic"|"static"|"connection",
///                "A": [...], "B": [...]}, ...]}
/// kind "connection" marks the parameter as entering delta through its
/// square.
ParamCharPoly parse_param_model(const std::string& json_text);
ParamCharPoly load_param_model(const std::string& path);

/// "%.*g" with 17 significant digits by default (exact double round
/// trip).
std::string format_double(double v, int digits = 17);

/// Locus CSV with header k,branch,re,im,vel_re,vel_im, branch-major,
/// full precision.
std::string locus_to_csv(const Locus& locus, int digits = 17);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Rebuilds branches and samples from CSV text (events and config are
/// not part of the CSV).
Locus locus_from_csv(const std::string& csv_text);

std::string events_to_json(const std::vector<LocusEvent>& events);

struct SvgOptions {
    int width = 820;
    int height = 620;
    bool velocity_arrows = true;
    /// Multiplier applied to velocity vectors before drawing; 0 picks
    /// a legible scale automatically. The value used is recorded in
    /// the SVG metadata.
    double arrow_scale = 0.0;
    /// Draw an arrow every this many samples; 0 picks automatically.
    int arrow_stride = 0;
};

/// Static SVG rendering of the locus: axes, one polyline per branch,
/// optional velocity arrows.
std::string locus_to_svg(const Locus& locus, const SvgOptions& opts = {});

}  // namespace rloci

#endif
