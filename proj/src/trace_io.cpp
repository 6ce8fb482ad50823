#include "lfc/trace_io.hpp"

#include <fstream>
#include <ostream>

#include "lfc/error.hpp"
#include "lfc/io_format.hpp"

namespace lfc {

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

}  // namespace

void write_trace_csv(std::ostream& out, const SimTrace& tr) {
  out << "t";
  for (int i = 1; i <= tr.agents; ++i)
    for (int k = 1; k <= tr.order; ++k) out << ",x" << i << '_' << k;
  for (int k = 1; k <= tr.order; ++k) out << ",x0_" << k;
  for (int i = 1; i <= tr.agents; ++i) out << ",u" << i;
  for (int i = 1; i <= tr.agents; ++i) out << ",s" << i;
  for (int i = 1; i <= tr.agents; ++i) out << ",err" << i;
  if (tr.lyapunov) out << ",V";
  out << '\n';
  for (std::size_t r = 0; r < tr.samples(); ++r) {
    out << format_double(tr.time[r]);
    for (const auto& xi : tr.x)
      for (Eigen::Index k = 0; k < xi[r].size(); ++k) out << ',' << format_double(xi[r](k));
    for (Eigen::Index k = 0; k < tr.leader[r].size(); ++k) out << ',' << format_double(tr.leader[r](k));
    for (const auto& u : tr.u) out << ',' << format_double(u[r]);
    for (const auto& s : tr.s) out << ',' << format_double(s[r]);
    for (const auto& e : tr.error) out << ',' << format_double(e[r]);
    if (tr.lyapunov) out << ',' << format_double((*tr.lyapunov)[r]);
    out << '\n';
  }
}

void write_trace_csv(const std::string& path, const SimTrace& trace) {
  auto out = open_for_write(path);
  write_trace_csv(out, trace);
  if (!out) throw Error("failed writing " + path);
}

void write_profiles_csv(std::ostream& out, const DelayProfiles& p) {
  out << "channel,kind,t,tau\n";
  auto dump = [&](const std::vector<DelayProfile>& fam, const char* kind) {
    for (std::size_t c = 0; c < fam.size(); ++c)
      for (std::size_t k = 0; k < fam[c].times().size(); ++k)
        out << c + 1 << ',' << kind << ',' << format_double(fam[c].times()[k]) << ',' << format_double(fam[c].values()[k]) << '\n';
  };
  dump(p.pin, "pin");
  dump(p.follower, "follower");
}

void write_profiles_csv(const std::string& path, const DelayProfiles& profiles) {
  auto out = open_for_write(path);
  write_profiles_csv(out, profiles);
  if (!out) throw Error("failed writing " + path);
}

void write_tune_log(const std::string& path, const TuneResult& r) {
  auto out = open_for_write(path);
  out << "iteration,phase,tau,objective,ratio1,ratio2,ratio3,feasible,best_tau,note\n";
  for (const auto& s : r.history) {
    out << s.iteration << ',' << s.phase << ',' << format_double(s.tau) << ',' << format_double(s.objective);
    for (double v : s.ratios) out << ',' << format_double(v);
    out << ',' << (s.feasible ? 1 : 0) << ',' << format_double(s.best_tau) << ",\"" << s.note << "\"\n";
  }
  if (!out) throw Error("failed writing " + path);
}

}  // namespace lfc
