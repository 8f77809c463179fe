#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mvrc/workload.hpp"

namespace mvrc {

namespace build {

inline std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline AttrSet attrs(std::string_view text) {
  const auto w = words(text);
  return {w.begin(), w.end()};
}

inline RelationDecl relation(std::string name, std::string_view attributes, std::string_view key) {
  return {std::move(name), words(attributes), words(key)};
}

inline ForeignKeyDecl foreign_key(std::string name, std::string domain, std::string_view domain_attrs,
                                  std::string range, std::string_view range_attrs) {
  return {std::move(name), std::move(domain), words(domain_attrs), std::move(range), words(range_attrs)};
}

inline ProgramNode insert(std::string label, std::string rel, const Schema& schema) {
  const auto* r = schema.find_relation(rel);
  return ProgramNode::stmt({std::move(label), StatementKind::Insert, std::move(rel), std::nullopt,
                            std::nullopt, r ? std::optional{r->attribute_set()} : std::nullopt});
}

inline ProgramNode key_delete(std::string label, std::string rel, const Schema& schema) {
  const auto* r = schema.find_relation(rel);
  return ProgramNode::stmt({std::move(label), StatementKind::KeyDelete, std::move(rel), std::nullopt,
                            std::nullopt, r ? std::optional{r->attribute_set()} : std::nullopt});
}

inline ProgramNode pred_delete(std::string label, std::string rel, std::string_view pred, const Schema& schema) {
  const auto* r = schema.find_relation(rel);
  return ProgramNode::stmt({std::move(label), StatementKind::PredDelete, std::move(rel), attrs(pred),
                            std::nullopt, r ? std::optional{r->attribute_set()} : std::nullopt});
}

inline ProgramNode key_select(std::string label, std::string rel, std::string_view obs) {
  return ProgramNode::stmt({std::move(label), StatementKind::KeySelect, std::move(rel), std::nullopt,
                            attrs(obs), std::nullopt});
}

inline ProgramNode pred_select(std::string label, std::string rel, std::string_view pred, std::string_view obs) {
  return ProgramNode::stmt({std::move(label), StatementKind::PredSelect, std::move(rel), attrs(pred),
                            attrs(obs), std::nullopt});
}

inline ProgramNode key_update(std::string label, std::string rel, std::string_view obs, std::string_view mod) {
  return ProgramNode::stmt({std::move(label), StatementKind::KeyUpdate, std::move(rel), std::nullopt,
                            attrs(obs), attrs(mod)});
}

inline ProgramNode pred_update(std::string label, std::string rel, std::string_view pred, std::string_view obs,
                               std::string_view mod) {
  return ProgramNode::stmt({std::move(label), StatementKind::PredUpdate, std::move(rel), attrs(pred),
                            attrs(obs), attrs(mod)});
}

inline FkAnnotation constraint(std::string target, std::string fk, std::string source) {
  return {std::move(target), std::move(fk), std::move(source)};
}

}  // namespace build

// Bids are kept per item in relation Bids_<item>; Buyer and Log are shared.
inline Workload auction_n(std::size_t n) {
  using namespace build;
  if (n == 0) throw std::invalid_argument("auction_n requires n >= 1");
  const bool single = n == 1;
  auto bids = [&](std::size_t i) { return single ? std::string("Bids") : "Bids_" + std::to_string(i); };
  Workload w;
  w.schema.relations.push_back(relation("Buyer", "id, calls", "id"));
  for (std::size_t i = 1; i <= n; ++i) w.schema.relations.push_back(relation(bids(i), "buyerId, bid", "buyerId"));
  w.schema.relations.push_back(relation("Log", "id, buyerId, bid", "id"));
  for (std::size_t i = 1; i <= n; ++i)
    w.schema.foreign_keys.push_back(
        foreign_key(single ? "f1" : "f1_" + std::to_string(i), bids(i), "buyerId", "Buyer", "id"));
  w.schema.foreign_keys.push_back(foreign_key("f2", "Log", "buyerId", "Buyer", "id"));

  for (std::size_t i = 1; i <= n; ++i) {
    const std::string suffix = single ? "" : "_" + std::to_string(i);
    const std::string f1 = single ? "f1" : "f1_" + std::to_string(i);
    w.programs.push_back({"FindBids" + suffix, "FB" + (single ? "" : std::to_string(i)),
                          ProgramNode::sequence({
                              key_update("q1", "Buyer", "calls", "calls"),
                              pred_select("q2", bids(i), "bid", "bid"),
                          }),
                          {}});
    w.programs.push_back({"PlaceBid" + suffix, "PB" + (single ? "" : std::to_string(i)),
                          ProgramNode::sequence({
                              key_update("q3", "Buyer", "calls", "calls"),
                              key_select("q4", bids(i), "bid"),
                              ProgramNode::optional({key_update("q5", bids(i), "", "bid")}),
                              insert("q6", "Log", w.schema),
                          }),
                          {constraint("q3", f1, "q4"), constraint("q3", f1, "q5"), constraint("q3", "f2", "q6")}});
  }
  return w;
}

inline Workload auction() { return auction_n(1); }

inline Workload smallbank() {
  using namespace build;
  Workload w;
  auto& s = w.schema;
  s.relations = {relation("Account", "Name, CustomerId", "Name"),
                 relation("Savings", "CustomerId, Balance", "CustomerId"),
                 relation("Checking", "CustomerId, Balance", "CustomerId")};
  s.foreign_keys = {foreign_key("fs", "Account", "CustomerId", "Savings", "CustomerId"),
                    foreign_key("fc", "Account", "CustomerId", "Checking", "CustomerId")};
  w.programs = {
      {"Amalgamate", "Am",
       ProgramNode::sequence({key_select("q1", "Account", "CustomerId"), key_select("q2", "Account", "CustomerId"),
                              key_update("q3", "Savings", "Balance", "Balance"),
                              key_update("q4", "Checking", "Balance", "Balance"),
                              key_update("q5", "Checking", "Balance", "Balance")}),
       {constraint("q3", "fs", "q1"), constraint("q4", "fc", "q1"), constraint("q5", "fc", "q2")}},
      {"Balance", "Bal",
       ProgramNode::sequence({key_select("q6", "Account", "CustomerId"), key_select("q7", "Savings", "Balance"),
                              key_select("q8", "Checking", "Balance")}),
       {constraint("q7", "fs", "q6"), constraint("q8", "fc", "q6")}},
      {"DepositChecking", "DC",
       ProgramNode::sequence({key_select("q9", "Account", "CustomerId"),
                              key_update("q10", "Checking", "Balance", "Balance")}),
       {constraint("q10", "fc", "q9")}},
      {"TransactSavings", "TS",
       ProgramNode::sequence({key_select("q11", "Account", "CustomerId"),
                              key_update("q12", "Savings", "Balance", "Balance")}),
       {constraint("q12", "fs", "q11")}},
      {"WriteCheck", "WC",
       ProgramNode::sequence({key_select("q13", "Account", "CustomerId"), key_select("q14", "Savings", "Balance"),
                              key_select("q15", "Checking", "Balance"),
                              key_update("q16", "Checking", "Balance", "Balance")}),
       {constraint("q14", "fs", "q13"), constraint("q15", "fc", "q13"), constraint("q16", "fc", "q13")}},
  };
  return w;
}

inline Schema tpcc_schema() {
  using namespace build;
  Schema s;
  s.relations = {
      relation("Warehouse", "w_id, w_name, w_street_1, w_street_2, w_city, w_state, w_zip, w_tax, w_ytd", "w_id"),
      relation("District",
               "d_id, d_w_id, d_name, d_street_1, d_street_2, d_city, d_state, d_zip, d_tax, d_ytd, d_next_o_id",
               "d_id, d_w_id"),
      relation("Customer",
               "c_id, c_d_id, c_w_id, c_first, c_middle, c_last, c_street_1, c_street_2, c_city, c_state, c_zip, "
               "c_phone, c_since, c_credit, c_credit_lim, c_discount, c_balance, c_ytd_payment, c_payment_cnt, "
               "c_delivery_cnt, c_data",
               "c_id, c_d_id, c_w_id"),
      relation("History", "h_c_id, h_c_d_id, h_c_w_id, h_d_id, h_w_id, h_date, h_amount, h_data",
               "h_c_id, h_c_d_id, h_c_w_id, h_d_id, h_w_id"),
      relation("New_Order", "no_o_id, no_d_id, no_w_id", "no_o_id, no_d_id, no_w_id"),
      relation("Orders", "o_id, o_d_id, o_w_id, o_c_id, o_entry_id, o_carrier_id, o_ol_cnt, o_all_local",
               "o_id, o_d_id, o_w_id"),
      relation("Order_Line",
               "ol_o_id, ol_d_id, ol_w_id, ol_number, ol_i_id, ol_supply_w_id, ol_delivery_d, ol_quantity, "
               "ol_amount, ol_dist_info",
               "ol_o_id, ol_d_id, ol_w_id, ol_number"),
      relation("Item", "i_id, i_im_id, i_name, i_price, i_data", "i_id"),
      relation("Stock",
               "s_i_id, s_w_id, s_quantity, s_dist_01, s_dist_02, s_dist_03, s_dist_04, s_dist_05, s_dist_06, "
               "s_dist_07, s_dist_08, s_dist_09, s_dist_10, s_ytd, s_order_cnt, s_remote_cnt, s_data",
               "s_i_id, s_w_id"),
  };
  s.foreign_keys = {
      foreign_key("f1", "District", "d_w_id", "Warehouse", "w_id"),
      foreign_key("f2", "Customer", "c_d_id, c_w_id", "District", "d_id, d_w_id"),
      foreign_key("f3", "History", "h_c_id, h_c_d_id, h_c_w_id", "Customer", "c_id, c_d_id, c_w_id"),
      foreign_key("f4", "History", "h_d_id, h_w_id", "District", "d_id, d_w_id"),
      foreign_key("f5", "New_Order", "no_o_id, no_d_id, no_w_id", "Orders", "o_id, o_d_id, o_w_id"),
      foreign_key("f6", "Orders", "o_d_id, o_w_id", "District", "d_id, d_w_id"),
      foreign_key("f7", "Orders", "o_c_id, o_d_id, o_w_id", "Customer", "c_id, c_d_id, c_w_id"),
      foreign_key("f8", "Order_Line", "ol_o_id, ol_d_id, ol_w_id", "Orders", "o_id, o_d_id, o_w_id"),
      foreign_key("f9", "Order_Line", "ol_i_id", "Item", "i_id"),
      foreign_key("f10", "Order_Line", "ol_supply_w_id", "Warehouse", "w_id"),
      foreign_key("f11", "Stock", "s_i_id", "Item", "i_id"),
      foreign_key("f12", "Stock", "s_w_id", "Warehouse", "w_id"),
  };
  return s;
}

inline Workload tpcc() {
  using namespace build;
  Workload w;
  w.schema = tpcc_schema();
  const auto& s = w.schema;
  const char* ol_pred = "ol_d_id, ol_o_id, ol_w_id";
  w.programs = {
      {"Delivery", "Del",
       ProgramNode::sequence({ProgramNode::loop({
           pred_select("q1", "New_Order", "no_d_id, no_w_id", "no_o_id"),
           key_delete("q2", "New_Order", s),
           key_select("q3", "Orders", "o_c_id"),
           key_update("q4", "Orders", "", "o_carrier_id"),
           pred_update("q5", "Order_Line", ol_pred, "", "ol_delivery_d"),
           pred_select("q6", "Order_Line", ol_pred, "ol_amount"),
           key_update("q7", "Customer", "c_balance, c_delivery_cnt", "c_balance, c_delivery_cnt"),
       })}),
       {constraint("q3", "f5", "q2"), constraint("q4", "f5", "q2"), constraint("q3", "f8", "q5"),
        constraint("q4", "f8", "q5"), constraint("q3", "f8", "q6"), constraint("q4", "f8", "q6"),
        constraint("q7", "f7", "q3"), constraint("q7", "f7", "q4")}},
      {"NewOrder", "NO",
       ProgramNode::sequence({
           key_select("q8", "Customer", "c_credit, c_discount, c_last"),
           key_select("q9", "Warehouse", "w_tax"),
           key_update("q10", "District", "d_next_o_id, d_tax", "d_next_o_id"),
           insert("q11", "Orders", s),
           insert("q12", "New_Order", s),
           ProgramNode::loop({
               key_select("q13", "Item", "i_data, i_name, i_price"),
               key_update("q14", "Stock",
                          "s_data, s_dist_01, s_dist_02, s_dist_03, s_dist_04, s_dist_05, s_dist_06, s_dist_07, "
                          "s_dist_08, s_dist_09, s_dist_10, s_order_cnt, s_quantity, s_remote_cnt, s_ytd",
                          "s_order_cnt, s_quantity, s_remote_cnt, s_ytd"),
               insert("q15", "Order_Line", s),
           }),
       }),
       {constraint("q10", "f2", "q8"), constraint("q9", "f1", "q10"), constraint("q10", "f6", "q11"),
        constraint("q8", "f7", "q11"), constraint("q11", "f5", "q12"), constraint("q11", "f8", "q15"),
        constraint("q13", "f9", "q15"), constraint("q13", "f11", "q14")}},
      {"OrderStatus", "OS",
       ProgramNode::sequence({
           ProgramNode::branch({pred_select("q16", "Customer", "c_d_id, c_last, c_w_id",
                                            "c_balance, c_first, c_id, c_middle")},
                               {key_select("q17", "Customer", "c_balance, c_first, c_last, c_middle")}),
           pred_select("q18", "Orders", "o_c_id, o_d_id, o_w_id", "o_carrier_id, o_entry_id, o_id"),
           pred_select("q19", "Order_Line", ol_pred,
                       "ol_amount, ol_delivery_d, ol_i_id, ol_quantity, ol_supply_w_id"),
       }),
       {}},
      {"Payment", "Pay",
       ProgramNode::sequence({
           key_update("q20", "Warehouse", "w_city, w_name, w_state, w_street_1, w_street_2, w_ytd, w_zip", "w_ytd"),
           key_update("q21", "District", "d_city, d_name, d_state, d_street_1, d_street_2, d_ytd, d_zip", "d_ytd"),
           ProgramNode::optional({pred_select("q22", "Customer", "c_d_id, c_last, c_w_id", "c_id")}),
           key_update("q23", "Customer",
                      "c_balance, c_city, c_credit, c_credit_lim, c_discount, c_first, c_last, c_middle, c_phone, "
                      "c_since, c_state, c_street_1, c_street_2, c_ytd_payment, c_zip",
                      "c_balance, c_payment_cnt, c_ytd_payment"),
           ProgramNode::optional({key_select("q24", "Customer", "c_data"), key_update("q25", "Customer", "", "c_data")}),
           insert("q26", "History", s),
       }),
       {constraint("q20", "f1", "q21"), constraint("q21", "f2", "q23"), constraint("q21", "f2", "q24"),
        constraint("q21", "f2", "q25"), constraint("q23", "f3", "q26"), constraint("q24", "f3", "q26"),
        constraint("q25", "f3", "q26"), constraint("q21", "f4", "q26")}},
      {"StockLevel", "SL",
       ProgramNode::sequence({
           key_select("q27", "District", "d_next_o_id"),
           pred_select("q28", "Order_Line", ol_pred, "ol_i_id"),
           pred_select("q29", "Stock", "s_quantity, s_w_id", "s_i_id"),
       }),
       {}},
  };
  return w;
}

struct BenchmarkId {
  enum class Kind { SmallBank, Tpcc, Auction, AuctionN } kind = Kind::Auction;
  std::size_t n = 1;

  std::string name() const {
    switch (kind) {
      case Kind::SmallBank: return "smallbank";
      case Kind::Tpcc: return "tpcc";
      case Kind::Auction: return "auction";
      case Kind::AuctionN: return "auction_n:" + std::to_string(n);
    }
    return "?";
  }
};

// Accepts smallbank, tpcc, auction and auction_n:<n>.
inline std::optional<BenchmarkId> parse_benchmark_id(std::string_view text) {
  using K = BenchmarkId::Kind;
  if (text == "smallbank") return BenchmarkId{K::SmallBank, 1};
  if (text == "tpcc") return BenchmarkId{K::Tpcc, 1};
  if (text == "auction") return BenchmarkId{K::Auction, 1};
  constexpr std::string_view prefix = "auction_n:";
  if (text.substr(0, prefix.size()) == prefix && text.size() > prefix.size()) {
    std::size_t n = 0;
    for (char c : text.substr(prefix.size())) {
      if (c < '0' || c > '9') return std::nullopt;
      n = n * 10 + static_cast<std::size_t>(c - '0');
      if (n > 100000) return std::nullopt;
    }
    if (n == 0) return std::nullopt;
    return BenchmarkId{K::AuctionN, n};
  }
  return std::nullopt;
}

inline Workload load_benchmark(const BenchmarkId& id) {
  switch (id.kind) {
    case BenchmarkId::Kind::SmallBank: return smallbank();
    case BenchmarkId::Kind::Tpcc: return tpcc();
    case BenchmarkId::Kind::Auction: return auction();
    case BenchmarkId::Kind::AuctionN: return auction_n(id.n);
  }
  return {};
}

}  // namespace mvrc
