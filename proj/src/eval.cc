#include "unacc/eval.h"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>

#include "unacc/util.h"

namespace unacc {

namespace {

void Finalize(ClassRow *row, std::size_t predicted) {
  row->precision_defined = predicted > 0;
  row->precision = predicted > 0 ? static_cast<double>(row->tp) / predicted : 0.0;
  row->recall =
      row->support > 0 ? static_cast<double>(row->tp) / row->support : 0.0;
  const double sum = row->precision + row->recall;
  row->f1 = sum > 0.0 ? 2.0 * row->precision * row->recall / sum : 0.0;
}

}  // namespace

std::vector<GoldEntry> LoadGoldTsv(std::istream &in) {
  std::map<std::string, Label> labels;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = StripCR(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::vector<std::string> cols = Split(line, '\t');
    if (cols.size() != 2 || cols[0].empty()) {
      throw ParseError(line_no, "expected verb<TAB>label");
    }
    Label label;
    if (cols[1] == "unaccusative") {
      label = Label::kUnaccusative;
    } else if (cols[1] == "unergative") {
      label = Label::kUnergative;
    } else {
      throw ParseError(line_no, "unknown gold label '" + cols[1] + "'");
    }
    auto [it, inserted] = labels.emplace(cols[0], label);
    if (!inserted && it->second != label) {
      throw ParseError(line_no, "conflicting labels for '" + cols[0] + "'");
    }
  }
  std::vector<GoldEntry> entries;
  for (const auto &[verb, label] : labels) entries.push_back({verb, label});
  return entries;
}

std::vector<GoldEntry> SampleGold(const std::vector<GoldEntry> &entries,
                                  double fraction, std::uint64_t rng_seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error("sample fraction must be in (0, 1]");
  }
  const auto n = static_cast<std::size_t>(fraction * entries.size());
  if (n == 0) throw Error("gold sample is empty");
  std::vector<GoldEntry> sample;
  auto rng = KeyedRng(rng_seed, {"evaluate", "sample"});
  std::sample(entries.begin(), entries.end(), std::back_inserter(sample), n, rng);
  return sample;
}

ClassMetrics Evaluate(std::span<const VerbVerdict> verdicts,
                      std::span<const GoldEntry> gold) {
  if (gold.empty()) throw Error("empty gold set");
  std::map<std::string, Label> gold_labels;
  for (const GoldEntry &g : gold) gold_labels[g.verb] = g.label;
  std::map<std::string, Label> predicted;
  for (const VerbVerdict &v : verdicts) predicted[v.verb] = v.label;

  ClassMetrics m;
  std::size_t predicted_unacc = 0;
  std::size_t predicted_unerg = 0;
  for (const auto &[verb, truth] : gold_labels) {
    ClassRow &own = truth == Label::kUnaccusative ? m.unaccusative : m.unergative;
    ClassRow &other = truth == Label::kUnaccusative ? m.unergative : m.unaccusative;
    ++own.support;
    auto it = predicted.find(verb);
    if (it == predicted.end()) {
      ++m.missing;
      ++own.fn;
      continue;
    }
    const Label guess = it->second;
    if (guess == Label::kAbstain) {
      ++m.abstained;
      ++own.fn;
      continue;
    }
    (guess == Label::kUnaccusative ? predicted_unacc : predicted_unerg) += 1;
    if (guess == truth) {
      ++own.tp;
    } else {
      ++own.fn;
      ++other.fp;
    }
  }
  for (const auto &[verb, label] : predicted) {
    if (label != Label::kAbstain && !gold_labels.contains(verb)) ++m.unattested;
  }
  Finalize(&m.unaccusative, predicted_unacc);
  Finalize(&m.unergative, predicted_unerg);
  return m;
}

void WriteMetricsTsv(const ClassMetrics &m, std::ostream &out) {
  for (const ClassRow *row : {&m.unaccusative, &m.unergative}) {
    out << LabelName(row->label) << '\t' << FormatDouble(row->precision) << '\t'
        << FormatDouble(row->recall) << '\t' << FormatDouble(row->f1) << '\t'
        << row->tp << '\t' << row->fp << '\t' << row->fn << '\t'
        << row->support << '\t' << (row->precision_defined ? "yes" : "no")
        << '\n';
  }
  out << "# abstained\t" << m.abstained << '\n';
  out << "# missing\t" << m.missing << '\n';
  out << "# unattested_predictions\t" << m.unattested << '\n';
}

void PrintMetricsTable(const ClassMetrics &m, std::ostream &out) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::left << std::setw(14) << "class" << std::right << std::setw(8)
      << "P" << std::setw(8) << "R" << std::setw(8) << "F1" << std::setw(9)
      << "support" << '\n';
  out << std::fixed << std::setprecision(2);
  for (const ClassRow *row : {&m.unaccusative, &m.unergative}) {
    out << std::left << std::setw(14) << LabelName(row->label) << std::right
        << std::setw(8) << row->precision << std::setw(8) << row->recall
        << std::setw(8) << row->f1 << std::setw(9) << row->support;
    if (!row->precision_defined) out << "  (no predictions)";
    out << '\n';
  }
  out << "abstained " << m.abstained << ", missing " << m.missing
      << ", unattested predictions " << m.unattested << '\n';
  out.flags(flags);
  out.precision(precision);
}

}  // namespace unacc
