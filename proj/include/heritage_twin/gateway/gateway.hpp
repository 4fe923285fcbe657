#pragma once

#include <atomic>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "heritage_twin/contextgraph/graph.hpp"
#include "heritage_twin/gateway/telemetry.hpp"
#include "heritage_twin/tstore/store.hpp"

namespace htwin {

// Per-message outcome. accepted + duplicates + rejected == reading count.
struct Ack {
    std::size_t accepted = 0;
    std::size_t duplicates = 0;
    std::size_t rejected = 0;

    std::size_t total() const { return accepted + duplicates + rejected; }

    std::string to_line() const {
        return fmt::format("{{\"accepted\":{},\"duplicates\":{},\"rejected\":{}}}", accepted, duplicates, rejected);
    }
};

struct GatewayTotals {
    std::size_t messages = 0;
    std::size_t failed_frames = 0;
    Ack readings;
};

// Ingestion layer: validates readings against the context graph and writes
// them to the store. Handling a message is atomic with respect to the store,
// so a nack'd message is safe to redeliver.
class Gateway {
public:
    Gateway(const graph::Graph& g, Store& store, FrameOptions options = {})
        : graph_(g), store_(store), options_(options) {}

    Ack handle(const TelemetryMessage& msg) {
        Ack ack;
        std::vector<Sample> known;
        known.reserve(msg.readings.size());
        for (const auto& r : msg.readings) {
            if (graph_.find_series(r.series_id))
                known.push_back(Sample{r.series_id, r.time, r.value});
            else
                ++ack.rejected;
        }
        const auto res = store_.insert_batch_detailed(known);  // throws -> whole message nack'd
        ack.accepted = res.inserted;
        ack.duplicates = res.duplicates;
        messages_.fetch_add(1);
        accepted_.fetch_add(ack.accepted);
        duplicates_.fetch_add(ack.duplicates);
        rejected_.fetch_add(ack.rejected);
        return ack;
    }

    Ack handle_frame(std::string_view frame) {
        try {
            return handle(parse_telemetry(frame, options_));
        } catch (const TelemetryError&) {
            failed_.fetch_add(1);
            throw;
        }
    }

    GatewayTotals totals() const {
        return {messages_.load(), failed_.load(), Ack{accepted_.load(), duplicates_.load(), rejected_.load()}};
    }

    const FrameOptions& options() const { return options_; }

private:
    const graph::Graph& graph_;
    Store& store_;
    FrameOptions options_;
    std::atomic<std::size_t> messages_{0}, failed_{0}, accepted_{0}, duplicates_{0}, rejected_{0};
};

// One frame in, one reply line out: the ack, or the error code and detail.
inline std::string respond_line(Gateway& gw, std::string_view frame) {
    auto escape = [](std::string s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\') out.push_back('\\');
            out.push_back(c);
        }
        return out;
    };
    try {
        return gw.handle_frame(frame).to_line();
    } catch (const TelemetryError& e) {
        return fmt::format("{{\"error\":\"{}\",\"detail\":\"{}\"}}", errc_name(e.code()), escape(e.what()));
    } catch (const std::exception& e) {
        return fmt::format("{{\"error\":\"NACK\",\"detail\":\"{}\"}}", escape(e.what()));
    }
}

} // namespace htwin
