#include "softsense/app/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "softsense/dataset.hpp"
#include "softsense/errors.hpp"

namespace softsense::app {

std::string fixed4(std::optional<double> v) {
  if (!v) return kUndefined;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

std::string full_precision(std::optional<double> v) {
  return v ? format_double(*v) : kUndefined;
}

TextTable::TextTable(std::vector<std::string> headers) : headers_(std::move(headers)) {}

void TextTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != headers_.size()) {
    throw InternalError("table row has " + std::to_string(cells.size()) + " cells for " +
                        std::to_string(headers_.size()) + " columns");
  }
  rows_.push_back(std::move(cells));
}

std::string TextTable::render() const {
  std::vector<std::size_t> width(headers_.size());
  for (std::size_t c = 0; c < headers_.size(); ++c) width[c] = headers_[c].size();
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string pad(width[c] - cells[c].size(), ' ');
      if (c > 0) out += "  ";
      out += c == 0 ? cells[c] + pad : pad + cells[c];
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(headers_);
  std::size_t total = 2 * (headers_.size() - 1);
  for (std::size_t w : width) total += w;
  out += std::string(total, '-') + "\n";
  for (const auto& row : rows_) out += line(row);
  return out;
}

std::string metrics_csv(const MetricsReport& report) {
  std::string out = "head,support,tp,fp,tn,fn,recall,precision,f_beta,beta\n";
  for (const HeadMetrics& h : report.heads) {
    out += h.name + "," + std::to_string(h.counts.support()) + "," +
           std::to_string(h.counts.tp) + "," + std::to_string(h.counts.fp) + "," +
           std::to_string(h.counts.tn) + "," + std::to_string(h.counts.fn) + "," +
           full_precision(h.recall) + "," + full_precision(h.precision) + "," +
           full_precision(h.f_beta) + "," + full_precision(h.beta) + "\n";
  }
  return out;
}

std::string metrics_text(const MetricsReport& report) {
  TextTable table({"Output", "Support", "TP", "FP", "TN", "FN", "Recall", "Precision", "F_beta",
                   "beta"});
  for (const HeadMetrics& h : report.heads) {
    table.add_row({h.name, std::to_string(h.counts.support()), std::to_string(h.counts.tp),
                   std::to_string(h.counts.fp), std::to_string(h.counts.tn),
                   std::to_string(h.counts.fn), fixed4(h.recall), fixed4(h.precision),
                   fixed4(h.f_beta), fixed4(h.beta)});
  }
  std::string out = table.render();
  out += "macro average: recall " + fixed4(report.macro_recall) + " (" +
         std::to_string(report.recall_skipped) + " undefined), precision " +
         fixed4(report.macro_precision) + " (" + std::to_string(report.precision_skipped) +
         " undefined), F_beta " + fixed4(report.macro_f_beta) + " (" +
         std::to_string(report.f_beta_skipped) + " undefined)\n";
  return out;
}

std::string history_csv(const std::vector<std::pair<std::string, const LossHistory*>>& stages) {
  auto num = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  std::string out = "stage,epoch,updates,J,J_x,J_y,sigma1_sq,sigma2_sq\n";
  for (const auto& [name, history] : stages) {
    for (const EpochRecord& r : *history) {
      out += name + "," + std::to_string(r.epoch) + "," + std::to_string(r.updates) + "," +
             num(r.loss) + "," + num(r.recon) + "," + num(r.pred) + "," + num(r.sigma1_sq) +
             "," + num(r.sigma2_sq) + "\n";
    }
  }
  return out;
}

std::string history_csv(const StackTrainResult& result) {
  std::vector<std::pair<std::string, const LossHistory*>> stages;
  for (std::size_t k = 0; k < result.layer_histories.size(); ++k) {
    stages.emplace_back("layer" + std::to_string(k + 1), &result.layer_histories[k]);
  }
  stages.emplace_back("classifier", &result.classifier_history);
  return history_csv(stages);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw DataError("cannot write " + path.string());
}

}  // namespace softsense::app
