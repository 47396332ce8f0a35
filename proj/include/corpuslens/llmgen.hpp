#pragma once

// Regenerates LLM corpora: builds zero-shot and few-shot picture-description
// prompts and sends them to an OpenAI-compatible chat-completions endpoint.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "corpuslens/corpus.hpp"
#include "corpuslens/error.hpp"
#include "corpuslens/random.hpp"

namespace corpuslens {

enum class PromptMode { zero_shot, few_shot };

inline std::string_view to_string(PromptMode m) { return m == PromptMode::zero_shot ? "zero_shot" : "few_shot"; }

inline PromptMode parse_prompt_mode(std::string_view s) {
  if (s == "zero_shot" || s == "zero-shot") return PromptMode::zero_shot;
  if (s == "few_shot" || s == "few-shot") return PromptMode::few_shot;
  throw Error("llmgen", "unknown prompt mode '" + std::string(s) + "'");
}

/// RFC 4648 base64 with padding.
inline std::string base64_encode(std::string_view bytes) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  const auto b = [&](std::size_t k) { return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[k])); };
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (b(i) << 16) | (b(i + 1) << 8) | b(i + 2);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (const std::size_t rest = bytes.size() - i; rest > 0) {
    const std::uint32_t v = (b(i) << 16) | (rest == 2 ? b(i + 1) << 8 : 0);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

struct ImagePayload {
  std::string base64;
  std::string media_type;

  std::string data_uri() const { return "data:" + media_type + ";base64," + base64; }
  bool operator==(const ImagePayload&) const = default;
};

inline std::string media_type_for(const std::filesystem::path& path) {
  std::string ext = utf8::fold(path.extension().string());
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".gif") return "image/gif";
  if (ext == ".webp") return "image/webp";
  throw Error("llmgen", "unrecognized image extension '" + path.extension().string() + "' (" + path.string() + ")");
}

inline ImagePayload encode_image(const std::filesystem::path& path) {
  const auto media = media_type_for(path);
  if (!std::filesystem::exists(path)) throw Error("llmgen", "image not found: " + path.string());
  return {base64_encode(detail::read_file(path, "llmgen")), media};
}

/// "9.6", "10": shortest decimal form.
inline std::string format_age(double age) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, age);
  return std::string(buf, r.ptr);
}

inline constexpr std::string_view kDescribeQuestion = "Wie würdest du dieses Bild beschreiben?";

inline std::string zero_shot_instruction(double age) {
  return "Du bist ein " + format_age(age) + "-jähriges Kind. " + std::string(kDescribeQuestion);
}

inline std::string few_shot_preamble(double age) {
  return "Du bist ein " + format_age(age) +
         "-jähriges Kind. Hier sind einige Bildbeschreibungen von anderen Kindern zu anderen Bildergeschichten:";
}

struct PromptExample {
  std::string doc_id;
  std::string story_id;
  ImagePayload image;
  std::string description;

  bool operator==(const PromptExample&) const = default;
};

/// One fully specified request. Few-shot content order: preamble, then
/// (image, description) per example, then the question and the target image.
struct PromptSpec {
  PromptMode mode = PromptMode::zero_shot;
  double age = 9.6;
  std::string target_story;
  std::string instruction_text;
  std::string question_text;  // few-shot only
  ImagePayload image;
  std::vector<PromptExample> examples;
  std::size_t max_tokens = 2000;
  double temperature = 0.7;

  void validate() const {
    if (mode == PromptMode::zero_shot && !examples.empty()) throw Error("llmgen", "zero-shot prompt with examples");
    if (mode == PromptMode::few_shot && examples.empty()) throw Error("llmgen", "few-shot prompt without examples");
    if (temperature < 0.0 || temperature > 2.0) throw Error("llmgen", "temperature must be in [0, 2]");
    for (const auto& e : examples) {
      if (e.story_id == target_story) throw Error("llmgen", "example drawn from the target story '" + target_story + "'");
    }
  }

  bool operator==(const PromptSpec&) const = default;
};

struct RetryPolicy {
  std::size_t max_retries = 5;
  std::chrono::milliseconds initial_backoff{1000};
  std::chrono::milliseconds max_backoff{60000};
};

struct EndpointConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4o";
  std::string api_key_env = "OPENAI_API_KEY";  // empty: send no credential
  std::chrono::seconds timeout{120};
  RetryPolicy retry;
};

struct GenerationPlan {
  PromptMode mode = PromptMode::zero_shot;
  std::string corpus_name;
  double age = 9.6;
  std::uint64_t seed = 1;
  std::map<std::string, std::size_t> counts;  // texts per story
  std::map<std::string, std::filesystem::path> image_paths;
  std::map<std::string, ImagePayload> images;
  Corpus examples;  // child descriptions for few-shot prompts
  std::size_t examples_per_prompt = 2;
  std::optional<std::size_t> max_tokens;
  std::optional<double> temperature;
  EndpointConfig endpoint;
  std::size_t concurrency = 4;
  double requests_per_minute = 0.0;  // 0: unlimited
  double max_failure_rate = 0.1;
  std::filesystem::path output;
  std::filesystem::path checkpoint;

  Source source() const { return mode == PromptMode::zero_shot ? Source::llm_zs : Source::llm_fs; }

  void validate() const {
    if (counts.empty()) throw Error("llmgen", "plan lists no stories");
    for (const auto& [story, n] : counts) {
      if (n < 1) throw Error("llmgen", "story '" + story + "' needs a count >= 1");
      if (!images.count(story)) throw Error("llmgen", "no image for story '" + story + "'");
    }
    for (const auto& [story, path] : image_paths) {
      if (!std::filesystem::exists(path)) throw Error("llmgen", "image not found: " + path.string());
    }
    if (mode == PromptMode::few_shot) {
      if (examples_per_prompt < 1) throw Error("llmgen", "few-shot plans need examples_per_prompt >= 1");
      for (const auto& d : examples.documents) {
        if (!images.count(d.story_id)) throw Error("llmgen", "no image for example story '" + d.story_id + "'");
      }
    }
    if (concurrency < 1) throw Error("llmgen", "concurrency must be >= 1");
    if (max_failure_rate < 0.0 || max_failure_rate > 1.0) throw Error("llmgen", "max_failure_rate must be in [0, 1]");
  }
};

/// Reads a JSON plan; relative paths resolve against the plan's directory.
/// Story counts default to the per-story document counts of the reference
/// corpus when omitted.
inline GenerationPlan load_plan(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(detail::read_file(path, "llmgen"));
  } catch (const nlohmann::json::exception& e) {
    throw Error("llmgen", path.string() + ": malformed plan (" + e.what() + ")");
  }
  const auto base = path.parent_path();
  const auto resolve = [&](const std::string& p) {
    std::filesystem::path q(p);
    return q.is_absolute() ? q : base / q;
  };
  GenerationPlan plan;
  try {
    plan.mode = parse_prompt_mode(j.value("mode", std::string("zero_shot")));
    plan.corpus_name = j.value("corpus_name", std::string(to_string(plan.source())));
    plan.age = j.value("age", 9.6);
    plan.seed = j.value("seed", std::uint64_t{1});
    plan.examples_per_prompt = j.value("examples_per_prompt", std::size_t{2});
    if (j.contains("max_tokens")) plan.max_tokens = j.at("max_tokens").get<std::size_t>();
    if (j.contains("temperature")) plan.temperature = j.at("temperature").get<double>();
    plan.concurrency = j.value("concurrency", std::size_t{4});
    plan.requests_per_minute = j.value("requests_per_minute", 0.0);
    plan.max_failure_rate = j.value("max_failure_rate", 0.1);
    if (j.contains("reference_corpus")) plan.examples = load_corpus(resolve(j.at("reference_corpus").get<std::string>()));
    if (j.contains("output")) plan.output = resolve(j.at("output").get<std::string>());
    if (j.contains("checkpoint")) plan.checkpoint = resolve(j.at("checkpoint").get<std::string>());
    if (j.contains("endpoint")) {
      const auto& e = j.at("endpoint");
      plan.endpoint.base_url = e.value("base_url", plan.endpoint.base_url);
      plan.endpoint.model = e.value("model", plan.endpoint.model);
      plan.endpoint.api_key_env = e.value("api_key_env", plan.endpoint.api_key_env);
      plan.endpoint.timeout = std::chrono::seconds(e.value("timeout_s", 120));
    }
    if (j.contains("retry")) {
      const auto& r = j.at("retry");
      plan.endpoint.retry.max_retries = r.value("max_retries", plan.endpoint.retry.max_retries);
      plan.endpoint.retry.initial_backoff = std::chrono::milliseconds(r.value("initial_backoff_ms", 1000));
      plan.endpoint.retry.max_backoff = std::chrono::milliseconds(r.value("max_backoff_ms", 60000));
    }
    std::map<std::string, std::size_t> reference_counts;
    for (const auto& d : plan.examples.documents) ++reference_counts[d.story_id];
    for (const auto& [story, s] : j.at("stories").items()) {
      plan.image_paths[story] = resolve(s.at("image").get<std::string>());
      if (s.contains("count")) {
        plan.counts[story] = s.at("count").get<std::size_t>();
      } else if (const auto it = reference_counts.find(story); it != reference_counts.end()) {
        plan.counts[story] = it->second;
      } else {
        throw Error("llmgen", "story '" + story + "' has no count and no reference documents");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("llmgen", path.string() + ": invalid plan (" + e.what() + ")");
  }
  for (const auto& [story, p] : plan.image_paths) plan.images[story] = encode_image(p);
  plan.validate();
  return plan;
}

/// Builds the prompt for one generation. Few-shot examples are distinct
/// documents drawn (seeded) from stories other than the target.
inline PromptSpec build_prompt(const GenerationPlan& plan, PromptMode mode, const std::string& target_story,
                               std::uint64_t rng_seed) {
  const auto img = plan.images.find(target_story);
  if (img == plan.images.end()) throw Error("llmgen", "target story '" + target_story + "' missing from plan");
  PromptSpec spec;
  spec.mode = mode;
  spec.age = plan.age;
  spec.target_story = target_story;
  spec.image = img->second;
  spec.temperature = plan.temperature.value_or(0.7);
  if (mode == PromptMode::zero_shot) {
    spec.instruction_text = zero_shot_instruction(plan.age);
    spec.max_tokens = plan.max_tokens.value_or(2000);
  } else {
    spec.instruction_text = few_shot_preamble(plan.age);
    spec.question_text = std::string(kDescribeQuestion);
    spec.max_tokens = plan.max_tokens.value_or(5000);
    std::vector<const Document*> pool;
    for (const auto& d : plan.examples.documents) {
      if (d.story_id != target_story) pool.push_back(&d);
    }
    const std::size_t k = plan.examples_per_prompt;
    if (pool.size() < std::max<std::size_t>(k, 1)) {
      throw Error("llmgen", "insufficient few-shot examples outside story '" + target_story + "' (" +
                                std::to_string(pool.size()) + " available, " + std::to_string(k) + " needed)");
    }
    Rng rng(rng_seed);
    for (std::size_t i = 0; i < k; ++i) {
      const auto pick = i + uniform_index(rng, pool.size() - i);
      std::swap(pool[i], pool[pick]);
      const Document& d = *pool[i];
      const auto ex_img = plan.images.find(d.story_id);
      if (ex_img == plan.images.end()) throw Error("llmgen", "no image for example story '" + d.story_id + "'");
      spec.examples.push_back({d.id, d.story_id, ex_img->second, d.text});
    }
  }
  spec.validate();
  return spec;
}

/// Chat-completions request body: {model, messages, max_tokens, temperature}.
/// A single user message carries text parts and data-URI image parts.
inline nlohmann::json chat_request_body(const EndpointConfig& endpoint, const PromptSpec& spec) {
  using nlohmann::json;
  const auto text = [](const std::string& t) { return json{{"type", "text"}, {"text", t}}; };
  const auto image = [](const ImagePayload& p) {
    return json{{"type", "image_url"}, {"image_url", {{"url", p.data_uri()}}}};
  };
  json content = json::array();
  content.push_back(text(spec.instruction_text));
  if (spec.mode == PromptMode::zero_shot) {
    content.push_back(image(spec.image));
  } else {
    for (const auto& e : spec.examples) {
      content.push_back(image(e.image));
      content.push_back(text(e.description));
    }
    content.push_back(text(spec.question_text));
    content.push_back(image(spec.image));
  }
  return json{{"model", endpoint.model},
              {"messages", json::array({json{{"role", "user"}, {"content", content}}})},
              {"max_tokens", spec.max_tokens},
              {"temperature", spec.temperature}};
}

struct GeneratedText {
  std::string text;
  std::string model;
  std::size_t prompt_tokens = 0;
  std::size_t completion_tokens = 0;
  std::size_t total_tokens = 0;
  double latency_ms = 0.0;
  std::size_t retries = 0;
};

namespace detail {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing '/'
};

inline ParsedUrl parse_base_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error("llmgen", "base URL needs a scheme: '" + url + "'");
  const auto slash = url.find('/', scheme + 3);
  ParsedUrl p;
  p.origin = url.substr(0, slash);
  p.prefix = slash == std::string::npos ? std::string() : url.substr(slash);
  while (!p.prefix.empty() && p.prefix.back() == '/') p.prefix.pop_back();
  return p;
}

inline std::string resolve_api_key(const EndpointConfig& endpoint) {
  if (endpoint.api_key_env.empty()) return {};
  const char* key = std::getenv(endpoint.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw Error("llmgen", "credential missing: environment variable " + endpoint.api_key_env + " is not set");
  }
  return key;
}

inline bool transient_status(int status) { return status == 408 || status == 429 || status >= 500; }

inline std::string extract_content(const nlohmann::json& message) {
  const auto it = message.find("content");
  if (it == message.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  std::string out;
  if (it->is_array()) {
    for (const auto& part : *it) {
      if (part.is_object() && part.value("type", "") == "text") out += part.value("text", "");
    }
  }
  return out;
}

}  // namespace detail

/// One chat-completion call with retries and exponential backoff on transient
/// failures (connection errors, 408, 429, 5xx).
inline GeneratedText generate_text(const EndpointConfig& endpoint, const PromptSpec& spec) {
  const auto url = detail::parse_base_url(endpoint.base_url);
  const auto key = detail::resolve_api_key(endpoint);
  const std::string body = chat_request_body(endpoint, spec).dump();
  httplib::Client client(url.origin);
  client.set_connection_timeout(endpoint.timeout);
  client.set_read_timeout(endpoint.timeout);
  client.set_write_timeout(endpoint.timeout);
  httplib::Headers headers;
  if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);

  GeneratedText out;
  auto backoff = endpoint.retry.initial_backoff;
  std::string last_error;
  const auto started = std::chrono::steady_clock::now();
  for (std::size_t attempt = 0;; ++attempt) {
    const auto res = client.Post(url.prefix + "/chat/completions", headers, body, "application/json");
    int status = 0;
    if (!res) {
      last_error = "connection failure (" + httplib::to_string(res.error()) + ")";
    } else {
      status = res->status;
      if (status == 200) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception&) {
          throw Error("llmgen", "malformed completion response");
        }
        const auto choices = j.find("choices");
        if (choices == j.end() || !choices->is_array() || choices->empty()) throw Error("llmgen", "empty completion");
        const auto& first = choices->front();
        out.text = first.contains("message") ? detail::extract_content(first.at("message")) : std::string();
        if (out.text.empty()) throw Error("llmgen", "empty completion");
        out.model = j.value("model", endpoint.model);
        if (const auto u = j.find("usage"); u != j.end() && u->is_object()) {
          out.prompt_tokens = u->value("prompt_tokens", std::size_t{0});
          out.completion_tokens = u->value("completion_tokens", std::size_t{0});
          out.total_tokens = u->value("total_tokens", std::size_t{0});
        }
        out.retries = attempt;
        out.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        return out;
      }
      if (status == 401 || status == 403) throw Error("llmgen", "auth failure (HTTP " + std::to_string(status) + ")");
      if (!detail::transient_status(status)) {
        throw Error("llmgen", "request rejected (HTTP " + std::to_string(status) + "): " + res->body.substr(0, 300));
      }
      last_error = "HTTP " + std::to_string(status);
    }
    if (attempt >= endpoint.retry.max_retries) {
      if (status == 429) {
        throw Error("llmgen", "rate limit exhausted after " + std::to_string(attempt) + " retries");
      }
      throw Error("llmgen", "giving up after " + std::to_string(attempt) + " retries: " + last_error);
    }
    std::this_thread::sleep_for(backoff);
    backoff = std::min(backoff * 2, endpoint.retry.max_backoff);
  }
}

struct GenerationFailure {
  std::string doc_id;
  std::string story_id;
  std::string message;
};

struct GenerationResult {
  Corpus corpus;
  std::vector<GenerationFailure> failures;
  std::size_t resumed = 0;    // documents taken from the checkpoint
  std::size_t generated = 0;  // documents produced by this run
};

namespace detail {

struct GenerationJob {
  std::string doc_id;
  std::string story_id;
  std::uint64_t seed;
};

inline std::vector<GenerationJob> plan_jobs(const GenerationPlan& plan) {
  std::vector<GenerationJob> jobs;
  std::uint64_t index = 0;
  for (const auto& [story, n] : plan.counts) {
    for (std::size_t k = 0; k < n; ++k, ++index) {
      char num[16];
      std::snprintf(num, sizeof num, "%04zu", k + 1);
      jobs.push_back({plan.corpus_name + "-" + story + "-" + num, story, plan.seed + index});
    }
  }
  return jobs;
}

/// Spaces request starts at least 60/rpm seconds apart across threads.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_minute)
      : interval_(requests_per_minute > 0
                      ? std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(60.0 / requests_per_minute))
                      : std::chrono::steady_clock::duration::zero()) {}

  void acquire() {
    if (interval_ == std::chrono::steady_clock::duration::zero()) return;
    std::chrono::steady_clock::time_point slot;
    {
      std::lock_guard lock(mu_);
      slot = std::max(next_, std::chrono::steady_clock::now());
      next_ = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  std::chrono::steady_clock::duration interval_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_{};
};

inline Document make_generated_document(const GenerationPlan& plan, const GenerationJob& job,
                                        const PromptSpec& spec, const GeneratedText& g) {
  Document d;
  d.id = job.doc_id;
  d.story_id = job.story_id;
  d.source = plan.source();
  d.text = g.text;
  std::string example_ids;
  for (const auto& e : spec.examples) example_ids += (example_ids.empty() ? "" : ",") + e.doc_id;
  d.meta = {{"model", g.model},
            {"mode", std::string(to_string(spec.mode))},
            {"age", format_age(spec.age)},
            {"seed", std::to_string(job.seed)},
            {"max_tokens", std::to_string(spec.max_tokens)},
            {"temperature", format_age(spec.temperature)},
            {"prompt_tokens", std::to_string(g.prompt_tokens)},
            {"completion_tokens", std::to_string(g.completion_tokens)},
            {"latency_ms", std::to_string(static_cast<long long>(g.latency_ms))},
            {"retries", std::to_string(g.retries)}};
  if (!example_ids.empty()) d.meta["examples"] = example_ids;
  return d;
}

}  // namespace detail

/// Writes the request body of every planned generation as JSON Lines without
/// contacting the endpoint.
inline void write_dry_run(std::ostream& out, const GenerationPlan& plan) {
  for (const auto& job : detail::plan_jobs(plan)) {
    out << chat_request_body(plan.endpoint, build_prompt(plan, plan.mode, job.story_id, job.seed)).dump() << '\n';
  }
}

/// Runs every planned generation with bounded concurrency. Completed
/// documents are appended to the checkpoint as they arrive, so a rerun skips
/// them. Aborts once failures exceed max_failure_rate of the planned total.
inline GenerationResult generate_corpus(const GenerationPlan& plan) {
  plan.validate();
  const auto jobs = detail::plan_jobs(plan);
  std::unordered_map<std::string, Document> done;
  if (!plan.checkpoint.empty() && std::filesystem::exists(plan.checkpoint)) {
    std::ifstream in(plan.checkpoint, std::ios::binary);
    for (auto& d : parse_corpus(in, plan.corpus_name, plan.checkpoint.string()).documents) {
      done.emplace(d.id, std::move(d));
    }
  }
  GenerationResult result;
  std::vector<const detail::GenerationJob*> pending;
  for (const auto& job : jobs) {
    if (done.count(job.doc_id)) {
      ++result.resumed;
    } else {
      pending.push_back(&job);
    }
  }

  std::ofstream checkpoint;
  if (!plan.checkpoint.empty()) {
    checkpoint.open(plan.checkpoint, std::ios::binary | std::ios::app);
    if (!checkpoint) throw Error("llmgen", "cannot write checkpoint " + plan.checkpoint.string());
  }
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  const auto max_failures = static_cast<std::size_t>(plan.max_failure_rate * static_cast<double>(jobs.size()));
  detail::RateLimiter limiter(plan.requests_per_minute);

  const auto worker = [&] {
    for (;;) {
      if (abort.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const auto& job = *pending[i];
      try {
        const auto spec = build_prompt(plan, plan.mode, job.story_id, job.seed);
        limiter.acquire();
        const auto generated = generate_text(plan.endpoint, spec);
        auto doc = detail::make_generated_document(plan, job, spec, generated);
        std::lock_guard lock(mu);
        if (checkpoint.is_open()) {
          checkpoint << to_json_line(doc).dump() << '\n';
          checkpoint.flush();
        }
        done.emplace(doc.id, std::move(doc));
        ++result.generated;
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        result.failures.push_back({job.doc_id, job.story_id, e.what()});
        if (result.failures.size() > max_failures) abort.store(true);
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(plan.concurrency, pending.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  if (abort.load()) {
    std::string msg = "aborted after " + std::to_string(result.failures.size()) + " failures (limit " +
                      std::to_string(max_failures) + " of " + std::to_string(jobs.size()) + " planned):";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, result.failures.size()); ++i) {
      msg += " [" + result.failures[i].doc_id + ": " + result.failures[i].message + "]";
    }
    throw Error("llmgen", msg);
  }
  result.corpus.name = plan.corpus_name;
  for (const auto& job : jobs) {
    if (const auto it = done.find(job.doc_id); it != done.end()) result.corpus.documents.push_back(it->second);
  }
  if (!plan.output.empty()) save_corpus(plan.output, result.corpus);
  return result;
}

}  // namespace corpuslens
