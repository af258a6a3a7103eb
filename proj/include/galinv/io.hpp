#pragma once

#include <string>

#include "galinv/invariants.hpp"
#include "galinv/reconstruct.hpp"

namespace galinv::io {

/// %.17g formatting used by every emitter, so identical inputs give
/// byte-identical files.
std::string format_double(double v);

/// Curve CSV: header "t,x1,x2,x3", one sample per row, rows sorted by
/// t, uniform spacing within relative tolerance 1e-9. Non-uniform
/// input is rejected, not resampled.
CurveSamples read_curve_csv(const std::string& path);
void write_curve_csv(const std::string& path, const CurveSamples& s);

/// JSON emitters: pretty-printed, keys sorted, numbers at 17
/// significant digits.
std::string to_json(const GalileanElement& g);
std::string to_json(const Signature& sig);
std::string to_json(const EquivalenceReport& rep);
std::string to_json(const RecoveryReport& rep);
std::string pullback_json(double at, const AlgebraElement& a);
std::string reconstruction_sidecar_json(const ConstantInvariants& inv,
                                        double h,
                                        const ReconstructionResult& rec);

/// Parse an element from its JSON object {"r": [9, row-major],
/// "s": num, "v": [3], "y": [3]}. Throws ParseError on malformed
/// input; construction revalidates the group constraints.
GalileanElement element_from_json_text(const std::string& text);
GalileanElement element_from_json_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

/// Plot CSV "s,w1,w2,w3" for external plotting.
void write_signature_plot_csv(const std::string& path, const Signature& sig);

}  // namespace galinv::io
