#pragma once

// JSON and CSV forms of measures, vectors, matrices and verdicts.  Field
// names and layouts are frozen in docs/schema.md; doubles are printed with
// "%.17g" so that equal inputs give byte-equal files.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "rwrs/distinguish.hpp"
#include "rwrs/measures.hpp"
#include "rwrs/reconstruct.hpp"
#include "rwrs/record.hpp"

namespace rwrs {

std::string format_double(double x);

nlohmann::json step_measure_to_json(const StepMeasure& mu);
StepMeasure step_measure_from_json(const nlohmann::json& j);

nlohmann::json scenery_measure_to_json(const SceneryMeasure& lambda);
SceneryMeasure scenery_measure_from_json(const nlohmann::json& j);

// word,length,value rows under a fixed header, in order.
void write_vector_csv(std::ostream& os, const WordOrder& order,
                      const std::vector<double>& values);
// Rebuilds the palindrome-first order from the rows; every word of every
// length up to the deepest one must be present exactly once.
CylinderVector read_vector_csv(std::istream& is,
                               const ColourAlphabet& alphabet = ColourAlphabet::binary());

// row,col,value rows for the nonzero entries, row-major.
void write_matrix_csv(std::ostream& os, const ReconMatrix& a);

nlohmann::json blocks_to_json(const ReconMatrix& a);
nlohmann::json structure_report_to_json(const StructureReport& report);
nlohmann::json violations_to_json(const std::vector<Violation>& violations);
nlohmann::json verdict_to_json(const Verdict& verdict);

// The record as one line of colour symbols.
void write_record_text(std::ostream& os, const RecordSequence& record);
RecordSequence read_record_text(std::istream& is,
                                const ColourAlphabet& alphabet = ColourAlphabet::binary());

}  // namespace rwrs
