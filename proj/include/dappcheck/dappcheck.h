#ifndef DAPPCHECK_DAPPCHECK_H
#define DAPPCHECK_DAPPCHECK_H

#include <stddef.h>

#if defined(DAPPCHECK_BUILDING)
#define DC_API __attribute__((visibility("default")))
#else
#define DC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dc_program dc_program;
typedef struct dc_chain dc_chain;
typedef struct dc_analysis dc_analysis;

typedef enum dc_status {
  DC_OK = 0,
  DC_ERR_INVALID_ARGUMENT = 1,
  DC_ERR_IO,
  DC_ERR_SYNTAX,
  DC_ERR_SSA_VIOLATION,
  DC_ERR_UNKNOWN_OPCODE,
  DC_ERR_DANGLING_TARGET,
  DC_ERR_RPC,
  DC_ERR_MALFORMED_RESPONSE,
  DC_ERR_MOCK_FORMAT,
  DC_ERR_NOT_A_STRING,
  DC_ERR_UNBOUND_LEAF,
  DC_ERR_ATTRIBUTES,
  DC_ERR_LLM,
  DC_ERR_INTERNAL
} dc_status;

typedef struct dc_options {
  size_t max_depth;
  size_t loop_bound;
  size_t max_states;
  int strict_supply;
} dc_options;

DC_API const char* dc_version(void);
DC_API const char* dc_status_name(dc_status status);
/* Message of the last failure on the calling thread; empty after success. */
DC_API const char* dc_last_error(void);
/* Strings returned through char** out-parameters are owned by the caller. */
DC_API void dc_string_free(char* s);

DC_API void dc_options_default(dc_options* opts);

DC_API dc_status dc_program_parse(const char* text, dc_program** out);
DC_API dc_status dc_program_load(const char* path, dc_program** out);
DC_API dc_status dc_program_print(const dc_program* program, char** out);
DC_API size_t dc_program_statement_count(const dc_program* program);
DC_API void dc_program_free(dc_program* program);

DC_API dc_status dc_chain_open_mock(const char* path, dc_chain** out);
DC_API dc_status dc_chain_open_mock_json(const char* json, dc_chain** out);
DC_API dc_status dc_chain_open_rpc(const char* url, dc_chain** out);
/* slot is hex ("0x5") or decimal. */
DC_API dc_status dc_chain_get_storage(dc_chain* chain, const char* address, const char* slot,
                                      char** out_hex);
DC_API dc_status dc_chain_read_string(dc_chain* chain, const char* address, const char* slot,
                                      char** out);
DC_API void dc_chain_free(dc_chain* chain);

/* chain and opts may be NULL. The analysis keeps its own copy of the program. */
DC_API dc_status dc_analyze(const dc_program* program, dc_chain* chain, const dc_options* opts,
                            dc_analysis** out);
DC_API dc_status dc_analysis_checkpoints(const dc_analysis* analysis, char** out_json);
/* JSON array of planned selectors. */
DC_API dc_status dc_analysis_plan(const dc_analysis* analysis, char** out_json);
DC_API dc_status dc_analysis_graphs(const dc_analysis* analysis, char** out_text);
DC_API dc_status dc_analysis_dump_facts(const dc_analysis* analysis, const char* dir);
/* Report JSON; *fired receives the number of fired findings (may be NULL). */
DC_API dc_status dc_audit(const dc_analysis* analysis, const char* attrs_json, dc_chain* chain,
                          char** out_report, size_t* fired);
DC_API void dc_analysis_free(dc_analysis* analysis);

/* Canned LLM answers ({"numeric": [...], "boolean": {...}}) to attributes JSON. */
DC_API dc_status dc_extract_responses(const char* responses_json, char** out_attrs,
                                      char** out_warnings);
/* Queries the LLM endpoint at llm_url for the description, then extracts. */
DC_API dc_status dc_extract_description(const char* description, const char* llm_url,
                                        char** out_attrs, char** out_warnings);

#ifdef __cplusplus
}
#endif

#endif
