#include "hmsc/driver.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hmsc/error.hpp"
#include "hmsc/ncut.hpp"
#include "hmsc/rng.hpp"
#include "hmsc/tree_approx.hpp"

namespace hmsc {

bool should_split(const CoarseGrid& grid, const HmscConfig& config) {
    return density_std(grid) > config.std_threshold;
}

namespace {

void validate_config(const HmscConfig& c) {
    if (c.threshold < 0 || c.threshold > 256) throw InvalidInput("config: threshold out of range");
    if (c.connectivity != 8 && c.connectivity != 26)
        throw InvalidInput("config: connectivity must be 8 or 26");
    if (c.d < 1 || c.d > 3) throw InvalidInput("config: d must be in 1..3");
    if (c.t < 0) throw InvalidInput("config: t must be >= 0");
    if (c.resolution < 1) throw InvalidInput("config: grid resolution must be >= 1");
    if (!(c.balance >= 0.0 && c.balance < 0.5)) throw InvalidInput("config: balance must be in [0, 0.5)");
    if (c.walk_steps < 0) throw InvalidInput("config: walk_steps must be >= 0");
    if (c.min_component_size < 1) throw InvalidInput("config: min_component_size must be >= 1");
    if (c.max_depth < 1) throw InvalidInput("config: max_depth must be >= 1");
    if (c.threads < 1) throw InvalidInput("config: threads must be >= 1");
}

// Every stage must keep the S sets a partition of the component's nodes.
void verify_partition(const CoarseGrid& grid, int32_t n, const char* stage) {
    if (grid.total_nodes() != n)
        throw Error(std::string("pipeline invariant broken at ") + stage + ": node count drifted");
    std::vector<char> seen(n, 0);
    int64_t total = 0;
    for (const auto& [c, s] : grid.cells) {
        for (int32_t v : s) {
            if (v < 0 || v >= n || seen[v])
                throw Error(std::string("pipeline invariant broken at ") + stage +
                            ": S is not a partition");
            seen[v] = 1;
        }
        total += static_cast<int64_t>(s.size());
    }
    if (total != n)
        throw Error(std::string("pipeline invariant broken at ") + stage + ": sum of delta != n");
}

struct Task {
    Component comp;
    int depth = 0;
};

class Scheduler {
  public:
    Scheduler(const Graph& g, const HmscConfig& cfg, std::ostream* log)
        : g_(g), cfg_(cfg), log_(log) {}

    void run(std::vector<Component> roots) {
        for (auto& c : roots) push({std::move(c), 0});
        int nthreads = cfg_.threads;
        if (nthreads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(nthreads);
            for (int i = 0; i < nthreads; ++i) pool.emplace_back([this] { worker(); });
            for (auto& t : pool) t.join();
        }
        if (error_) std::rethrow_exception(error_);
    }

    std::vector<std::vector<int32_t>> take_segments() { return std::move(segments_); }

  private:
    void push(Task t) {
        {
            std::lock_guard<std::mutex> lk(mu_);
            ++outstanding_;
            queue_.push_back(std::move(t));
        }
        cv_.notify_one();
    }

    void worker() {
        std::unique_lock<std::mutex> lk(mu_);
        while (true) {
            cv_.wait(lk, [this] { return !queue_.empty() || outstanding_ == 0 || error_; });
            if (queue_.empty()) {
                if (outstanding_ == 0 || error_) return;
                continue;
            }
            Task t = std::move(queue_.front());
            queue_.pop_front();
            lk.unlock();
            try {
                process(std::move(t));
            } catch (...) {
                std::lock_guard<std::mutex> g(mu_);
                if (!error_) error_ = std::current_exception();
                queue_.clear();
                outstanding_ = 0;
                cv_.notify_all();
                return;
            }
            lk.lock();
            if (--outstanding_ == 0) cv_.notify_all();
        }
    }

    void emit(std::vector<int32_t> nodes) {
        std::lock_guard<std::mutex> lk(mu_);
        segments_.push_back(std::move(nodes));
    }

    void logline(const std::string& s) {
        if (!log_) return;
        std::lock_guard<std::mutex> lk(log_mu_);
        (*log_) << s << "\n";
    }

    void process(Task task) {
        const Component& comp = task.comp;
        const int32_t n = comp.size();
        const int32_t root = comp.nodes.front();
        std::ostringstream msg;
        if (n < cfg_.min_component_size || n < cfg_.d + 2) {
            msg << "hmsc: stop root=" << root << " n=" << n << " depth=" << task.depth
                << " reason=size";
            logline(msg.str());
            emit(std::move(task.comp.nodes));
            return;
        }
        if (task.depth >= cfg_.max_depth) {
            msg << "hmsc: stop root=" << root << " n=" << n << " depth=" << task.depth
                << " reason=depth-limit";
            logline(msg.str());
            emit(std::move(task.comp.nodes));
            return;
        }

        LocalView lv = make_local_view(g_, comp);
        EigenSolveOptions opts;
        opts.seed = mix_seed(cfg_.seed, static_cast<uint64_t>(root));
        DiffusionMap dmap = embed(lv, cfg_.d, cfg_.t, cfg_.spectrum, opts);
        CoarseGrid grid = coarsen(dmap, cfg_.resolution);
        verify_partition(grid, n, "coarsen");
        double stdv = density_std(grid);
        if (!(stdv > cfg_.std_threshold)) {
            msg << "hmsc: stop root=" << root << " n=" << n << " depth=" << task.depth
                << " reason=density std=" << stdv;
            logline(msg.str());
            emit(std::move(task.comp.nodes));
            return;
        }
        reconstruct(grid, lv);
        verify_partition(grid, n, "reconstruct");
        skeletonize(grid);
        verify_partition(grid, n, "skeletonize");
        TreeApprox tree = break_cycles(std::move(grid), cfg_.walk_steps);
        verify_partition(tree.grid, n, "break_cycles");
        ExtendedAdjacencyGraph eag = build_eag(tree, lv);
        CutResult cut;
        try {
            cut = min_ncut_split(tree, eag, lv, cfg_.balance);
        } catch (const UnsplittableError& e) {
            msg << "hmsc: stop root=" << root << " n=" << n << " depth=" << task.depth
                << " reason=unsplittable (" << e.what() << ") std=" << stdv;
            logline(msg.str());
            emit(std::move(task.comp.nodes));
            return;
        }
        Component left, right;
        left.nodes.reserve(cut.w_nodes.size());
        right.nodes.reserve(cut.wc_nodes.size());
        for (int32_t v : cut.w_nodes) left.nodes.push_back(comp.nodes[v]);
        for (int32_t v : cut.wc_nodes) right.nodes.push_back(comp.nodes[v]);
        msg << "hmsc: split root=" << root << " n=" << n << " depth=" << task.depth
            << " std=" << stdv << " ncut=" << cut.ncut << " children=" << left.size() << "+"
            << right.size();
        logline(msg.str());
        push({std::move(left), task.depth + 1});
        push({std::move(right), task.depth + 1});
    }

    const Graph& g_;
    const HmscConfig& cfg_;
    std::ostream* log_;
    std::mutex mu_;
    std::mutex log_mu_;
    std::condition_variable cv_;
    std::deque<Task> queue_;
    int64_t outstanding_ = 0;
    std::vector<std::vector<int32_t>> segments_;
    std::exception_ptr error_;
};

}  // namespace

Segmentation segment(const BoundaryMap& bpm, const HmscConfig& config, std::ostream* log) {
    validate_config(config);
    PixelGraph pg = build_graph(bpm, config.threshold, config.connectivity);
    std::vector<Component> comps = connected_components(pg.g);
    Scheduler sched(pg.g, config, log);
    sched.run(std::move(comps));
    std::vector<std::vector<int32_t>> segments = sched.take_segments();
    std::sort(segments.begin(), segments.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    Segmentation seg;
    seg.width = bpm.width;
    seg.height = bpm.height;
    seg.labels.assign(static_cast<size_t>(bpm.width) * bpm.height, 0);
    for (size_t i = 0; i < segments.size(); ++i) {
        uint32_t lab = static_cast<uint32_t>(i + 1);
        for (int32_t v : segments[i])
            seg.labels[static_cast<size_t>(pg.py[v]) * bpm.width + pg.px[v]] = lab;
    }
    return seg;
}

Segmentation cc_segment(const BoundaryMap& bpm, int threshold, int connectivity) {
    PixelGraph pg = build_graph(bpm, threshold, connectivity);
    return label_components(pg, connected_components(pg.g));
}

}  // namespace hmsc
